#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpinem/amplifier.hpp"
#include "qpinem/diagnostics.hpp"
#include "qpinem/fock.hpp"
#include "qpinem/scattering.hpp"

namespace qpinem::io {

// 17 significant digits, "." separator.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::filesystem::path& path);
std::string to_csv(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

void write_statistics(const std::filesystem::path& path, const PhotonStatistics& stats);
PhotonStatistics read_statistics(const std::filesystem::path& path);

void write_spectrum(const std::filesystem::path& path, const ElectronSpectrum& spectrum);
ElectronSpectrum read_spectrum(const std::filesystem::path& path);

void write_continuous(const std::filesystem::path& path, const ContinuousSpectrum& spectrum);
ContinuousSpectrum read_continuous(const std::filesystem::path& path);
ZlpKernel read_zlp(const std::filesystem::path& path);

void write_fidelity_profile(const std::filesystem::path& path, const std::vector<FidelityPoint>& profile);

// Matrix with a header row of column values and a leading column of row values.
void write_matrix(const std::filesystem::path& path, const std::string& corner, const std::vector<double>& row_values,
                  const std::vector<double>& col_values, const Eigen::MatrixXd& m);

std::string photon_state_to_json(const PhotonState& state);
PhotonState photon_state_from_json(const std::string& text);
std::string amplifier_params_to_json(const AmplifierParams& params);
AmplifierParams amplifier_params_from_json(const std::string& text);

}  // namespace qpinem::io
