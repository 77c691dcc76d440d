#include <filesystem>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace qpinem;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "qpinem_io_test";
  fs::create_directories(d);
  return d / name;
}
}  // namespace

TEST(Io, FormatDouble) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(1.0), "1");
  EXPECT_EQ(io::format_double(-0.0), "0");
  EXPECT_EQ(io::format_double(1e-300), "1e-300");
  EXPECT_EQ(io::format_double(1.0 / 3.0), "0.33333333333333331");
}

TEST(Io, StatisticsRoundTrip) {
  PhotonStatistics s = thermal_statistics(2.0);
  io::write_statistics(scratch("stats.csv"), s);
  PhotonStatistics r = io::read_statistics(scratch("stats.csv"));
  ASSERT_EQ(r.p.size(), s.p.size());
  for (size_t i = 0; i < s.p.size(); ++i) EXPECT_EQ(r.p[i], s.p[i]);
  std::string text = io::read_text(scratch("stats.csv"));
  EXPECT_EQ(text.rfind("n,p\n", 0), 0u);
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(Io, SpectrumRoundTrip) {
  ElectronSpectrum s = closed_form_thermal_spectrum(0.8, 6);
  io::write_spectrum(scratch("spec.csv"), s);
  ElectronSpectrum r = io::read_spectrum(scratch("spec.csv"));
  EXPECT_EQ(r.k_max, 6);
  for (int k = -6; k <= 6; ++k) EXPECT_EQ(r.at(k), s.at(k));
}

TEST(Io, ZlpIsRenormalisedOnLoad) {
  io::write_text(scratch("zlp.csv"), "energy_eV,density\n-0.01,2\n0,4\n0.01,2\n");
  ZlpKernel z = io::read_zlp(scratch("zlp.csv"));
  EXPECT_NEAR(z.normalization, 1.0 / 0.08, 1e-12);
  EXPECT_NEAR(z.density[1], 50.0, 1e-10);
}

TEST(Io, MalformedInputs) {
  EXPECT_THROW(io::read_csv(scratch("does_not_exist.csv")), IoError);
  io::write_text(scratch("bad.csv"), "k,p\n0,abc\n");
  EXPECT_THROW(io::read_spectrum(scratch("bad.csv")), IoError);
  io::write_text(scratch("ragged.csv"), "k,p\n0\n");
  EXPECT_THROW(io::read_spectrum(scratch("ragged.csv")), IoError);
  io::write_text(scratch("nocol.csv"), "x,y\n0,1\n");
  EXPECT_THROW(io::read_spectrum(scratch("nocol.csv")), IoError);
  EXPECT_THROW(io::photon_state_from_json("{"), IoError);
}

TEST(Io, PhotonStateJsonRoundTrip) {
  PhotonState st = coherent_state(cplx(0.5, -0.3), 8, 1e-6);
  PhotonState r = io::photon_state_from_json(io::photon_state_to_json(st));
  EXPECT_EQ(r.n_max(), 8);
  EXPECT_LT((r.rho() - st.rho()).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(Io, AmplifierParamsJson) {
  AmplifierParams p = io::amplifier_params_from_json(R"({"alpha_re": 1.5, "alpha_im": -0.5, "gain_db": 20})");
  EXPECT_NEAR(p.gain, 100.0, 1e-12);
  EXPECT_EQ(p.alpha, cplx(1.5, -0.5));
  AmplifierParams q = io::amplifier_params_from_json(io::amplifier_params_to_json(p));
  EXPECT_NEAR(q.gain, p.gain, 1e-12);
}

TEST(Io, MatrixCsv) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  io::write_matrix(scratch("m.csv"), "energy_keV", {10.0, 20.0}, {1.0, 1.5, 2.0}, m);
  EXPECT_EQ(io::read_text(scratch("m.csv")), "energy_keV,1,1.5,2\n10,1,2,3\n20,4,5,6\n");
}
