#include "qpinem/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qpinem/errors.hpp"

namespace qpinem::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::string trim(std::string s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const fs::path& path, int line) {
  if (s == "nan") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const char* b = s.data();
  if (!s.empty() && s[0] == '+') ++b;
  auto res = std::from_chars(b, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  }
  return v;
}

const std::vector<double>& column_or_throw(const CsvTable& t, const std::string& name, const fs::path& path,
                                           std::vector<double>& scratch) {
  int c = t.column(name);
  if (c < 0) throw IoError(path.string() + ": missing column '" + name + "'");
  scratch.clear();
  for (const auto& r : t.rows) scratch.push_back(r[static_cast<size_t>(c)]);
  return scratch;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

CsvTable read_csv(const fs::path& path) {
  std::string text = read_text(path);
  std::stringstream ss(text);
  std::string line;
  CsvTable t;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (t.header.empty()) {
      t.header = split(line);
      continue;
    }
    std::vector<std::string> cells = split(line);
    if (cells.size() != t.header.size()) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                    " fields");
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c, path, lineno));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw IoError(path.string() + ": empty CSV file");
  return t;
}

std::string to_csv(const CsvTable& t) {
  std::string out;
  for (size_t i = 0; i < t.header.size(); ++i) {
    if (i) out += ',';
    out += t.header[i];
  }
  out += '\n';
  for (const auto& r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_double(r[i]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const fs::path& path, const CsvTable& t) { write_text(path, to_csv(t)); }

void write_statistics(const fs::path& path, const PhotonStatistics& s) {
  CsvTable t{{"n", "p"}, {}};
  for (size_t n = 0; n < s.p.size(); ++n) t.rows.push_back({static_cast<double>(n), s.p[n]});
  write_csv(path, t);
}

PhotonStatistics read_statistics(const fs::path& path) {
  CsvTable t = read_csv(path);
  std::vector<double> n, p;
  column_or_throw(t, "n", path, n);
  column_or_throw(t, "p", path, p);
  PhotonStatistics s;
  int n_max = -1;
  for (double v : n) {
    if (v < 0 || v != std::floor(v)) throw IoError(path.string() + ": photon numbers must be non-negative integers");
    n_max = std::max(n_max, static_cast<int>(v));
  }
  if (n_max < 0) throw IoError(path.string() + ": no rows");
  s.p.assign(static_cast<size_t>(n_max) + 1, 0.0);
  for (size_t i = 0; i < n.size(); ++i) s.p[static_cast<size_t>(n[i])] = p[i];
  s.tail_mass = std::max(0.0, 1.0 - s.total());
  return s;
}

void write_spectrum(const fs::path& path, const ElectronSpectrum& s) {
  CsvTable t{{"k", "p"}, {}};
  for (int k = -s.k_max; k <= s.k_max; ++k) t.rows.push_back({static_cast<double>(k), s.at(k)});
  write_csv(path, t);
}

ElectronSpectrum read_spectrum(const fs::path& path) {
  CsvTable t = read_csv(path);
  std::vector<double> k, p;
  column_or_throw(t, "k", path, k);
  column_or_throw(t, "p", path, p);
  int K = 0;
  for (double v : k) {
    if (v != std::floor(v)) throw IoError(path.string() + ": ladder indices must be integers");
    K = std::max(K, static_cast<int>(std::abs(v)));
  }
  ElectronSpectrum s;
  s.k_max = K;
  s.p.assign(2 * K + 1, 0.0);
  for (size_t i = 0; i < k.size(); ++i) s.p[static_cast<size_t>(static_cast<int>(k[i]) + K)] = p[i];
  s.lost_mass = std::max(0.0, 1.0 - s.total());
  return s;
}

void write_continuous(const fs::path& path, const ContinuousSpectrum& s) {
  CsvTable t{{"energy_eV", "density"}, {}};
  for (size_t i = 0; i < s.energy.size(); ++i) t.rows.push_back({s.energy[i], s.density[i]});
  write_csv(path, t);
}

ContinuousSpectrum read_continuous(const fs::path& path) {
  CsvTable t = read_csv(path);
  ContinuousSpectrum s;
  std::vector<double> tmp;
  s.energy = column_or_throw(t, "energy_eV", path, tmp);
  s.density = column_or_throw(t, "density", path, tmp);
  return s;
}

ZlpKernel read_zlp(const fs::path& path) {
  ContinuousSpectrum s = read_continuous(path);
  try {
    return make_zlp_kernel(std::move(s.energy), std::move(s.density));
  } catch (const ValidationError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_fidelity_profile(const fs::path& path, const std::vector<FidelityPoint>& profile) {
  CsvTable t{{"k", "fidelity", "detection_probability"}, {}};
  for (const auto& p : profile) t.rows.push_back({static_cast<double>(p.k), p.fidelity, p.detection_probability});
  write_csv(path, t);
}

void write_matrix(const fs::path& path, const std::string& corner, const std::vector<double>& row_values,
                  const std::vector<double>& col_values, const Eigen::MatrixXd& m) {
  if (m.rows() != static_cast<long>(row_values.size()) || m.cols() != static_cast<long>(col_values.size())) {
    throw ValidationError("write_matrix: shape does not match the axis values");
  }
  CsvTable t;
  t.header.push_back(corner);
  for (double c : col_values) t.header.push_back(format_double(c));
  for (size_t i = 0; i < row_values.size(); ++i) {
    std::vector<double> r{row_values[i]};
    for (long j = 0; j < m.cols(); ++j) r.push_back(m(static_cast<long>(i), j));
    t.rows.push_back(std::move(r));
  }
  write_csv(path, t);
}

std::string photon_state_to_json(const PhotonState& state) {
  json j;
  j["n_max"] = state.n_max();
  json re = json::array(), im = json::array();
  for (int r = 0; r < state.dim(); ++r) {
    json rr = json::array(), ii = json::array();
    for (int c = 0; c < state.dim(); ++c) {
      rr.push_back(state.rho()(r, c).real());
      ii.push_back(state.rho()(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  j["rho_re"] = std::move(re);
  j["rho_im"] = std::move(im);
  return j.dump() + "\n";
}

PhotonState photon_state_from_json(const std::string& text) {
  json j = parse_json(text);
  try {
    int n_max = j.at("n_max").get<int>();
    const json& re = j.at("rho_re");
    const json& im = j.at("rho_im");
    int dim = n_max + 1;
    if (n_max < 0 || static_cast<int>(re.size()) != dim || static_cast<int>(im.size()) != dim) {
      throw IoError("photon state: matrix size does not match n_max");
    }
    Eigen::MatrixXcd rho(dim, dim);
    for (int r = 0; r < dim; ++r) {
      if (static_cast<int>(re[r].size()) != dim || static_cast<int>(im[r].size()) != dim) {
        throw IoError("photon state: ragged matrix");
      }
      for (int c = 0; c < dim; ++c) rho(r, c) = cplx(re[r][c].get<double>(), im[r][c].get<double>());
    }
    double tr = rho.diagonal().real().sum();
    return PhotonState(std::move(rho), std::max(0.0, 1.0 - tr));
  } catch (const json::exception& e) {
    throw IoError(std::string("photon state: ") + e.what());
  }
}

std::string amplifier_params_to_json(const AmplifierParams& p) {
  json j;
  j["alpha_re"] = p.alpha.real();
  j["alpha_im"] = p.alpha.imag();
  j["gain_db"] = p.gain_db();
  return j.dump(2) + "\n";
}

AmplifierParams amplifier_params_from_json(const std::string& text) {
  json j = parse_json(text);
  try {
    return AmplifierParams::from_db(cplx(j.at("alpha_re").get<double>(), j.value("alpha_im", 0.0)),
                                    j.at("gain_db").get<double>());
  } catch (const json::exception& e) {
    throw IoError(std::string("amplifier params: ") + e.what());
  }
}

}  // namespace qpinem::io
