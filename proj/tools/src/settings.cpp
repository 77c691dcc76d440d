#include "settings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "qpinem/errors.hpp"

namespace qpinem::cli {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& text, const std::string& key) {
  std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ValidationError(key + ": expected a boolean, got '" + text + "'");
}

nlohmann::json from_text(const ParamSpec& spec, const std::string& text) {
  switch (spec.kind) {
    case Kind::number:
      return parse_number(text, spec.key);
    case Kind::integer: {
      double v = parse_number(text, spec.key);
      if (v != std::floor(v) || std::abs(v) > 2e9) throw ValidationError(spec.key + ": expected an integer");
      return static_cast<int>(v);
    }
    case Kind::text:
      return text;
    case Kind::list:
      return parse_list(text, spec.key);
    case Kind::boolean:
      return parse_bool(text, spec.key);
  }
  return nullptr;
}

nlohmann::json from_config(const ParamSpec& spec, const nlohmann::json& v) {
  const std::string& key = spec.key;
  switch (spec.kind) {
    case Kind::number:
      if (!v.is_number()) throw ValidationError("config '" + key + "': expected a number");
      return v.get<double>();
    case Kind::integer:
      if (!v.is_number_integer()) throw ValidationError("config '" + key + "': expected an integer");
      return v.get<int>();
    case Kind::text:
      if (!v.is_string()) throw ValidationError("config '" + key + "': expected a string");
      return v;
    case Kind::list: {
      if (v.is_string()) return parse_list(v.get<std::string>(), key);
      if (v.is_number()) return std::vector<double>{v.get<double>()};
      if (!v.is_array()) throw ValidationError("config '" + key + "': expected a list of numbers");
      std::vector<double> out;
      for (const auto& e : v) {
        if (!e.is_number()) throw ValidationError("config '" + key + "': expected a list of numbers");
        out.push_back(e.get<double>());
      }
      return out;
    }
    case Kind::boolean:
      if (!v.is_boolean()) throw ValidationError("config '" + key + "': expected true or false");
      return v;
  }
  return nullptr;
}

}  // namespace

double parse_number(const std::string& text, const std::string& key) {
  std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ValidationError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::string t = trim(text);
  if (t.empty()) return {};
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    size_t start = 0;
    for (size_t pos; (pos = t.find(':', start)) != std::string::npos; start = pos + 1) parts.push_back(t.substr(start, pos - start));
    parts.push_back(t.substr(start));
    if (parts.size() != 3) throw ValidationError(key + ": range must be start:stop:count");
    double a = parse_number(parts[0], key), b = parse_number(parts[1], key), n = parse_number(parts[2], key);
    if (n < 1 || n != std::floor(n) || n > 1e7) throw ValidationError(key + ": range count must be a positive integer");
    int count = static_cast<int>(n);
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = count == 1 ? a : a + (b - a) * i / (count - 1);
    return out;
  }
  std::vector<double> out;
  size_t start = 0;
  for (size_t pos; (pos = t.find(',', start)) != std::string::npos; start = pos + 1) {
    out.push_back(parse_number(t.substr(start, pos - start), key));
  }
  out.push_back(parse_number(t.substr(start), key));
  return out;
}

Settings::Settings(const std::vector<ParamSpec>& specs, const nlohmann::json& config,
                   const std::map<std::string, std::string>& flags) {
  for (auto it = config.begin(); it != config.end(); ++it) {
    bool known = std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.key == it.key(); });
    if (!known) throw ValidationError("config: unknown parameter '" + it.key() + "'");
  }
  for (const ParamSpec& spec : specs) {
    auto f = flags.find(spec.key);
    if (f != flags.end()) {
      resolved_[spec.key] = from_text(spec, f->second);
    } else if (config.contains(spec.key) && !config.at(spec.key).is_null()) {
      resolved_[spec.key] = from_config(spec, config.at(spec.key));
    } else if (!spec.fallback.empty()) {
      resolved_[spec.key] = from_text(spec, spec.fallback);
    } else {
      resolved_[spec.key] = nullptr;
    }
  }
}

const nlohmann::json& Settings::at(const std::string& key) const {
  if (!resolved_.contains(key)) throw std::logic_error("undeclared parameter " + key);
  const nlohmann::json& v = resolved_.at(key);
  if (v.is_null()) throw ValidationError("missing required parameter '" + key + "'");
  return v;
}

bool Settings::has(const std::string& key) const { return resolved_.contains(key) && !resolved_.at(key).is_null(); }
double Settings::number(const std::string& key) const { return at(key).get<double>(); }
int Settings::integer(const std::string& key) const { return at(key).get<int>(); }
std::string Settings::text(const std::string& key) const { return at(key).get<std::string>(); }
std::vector<double> Settings::list(const std::string& key) const { return at(key).get<std::vector<double>>(); }
bool Settings::boolean(const std::string& key) const { return at(key).get<bool>(); }

std::filesystem::path Context::output(const std::string& name) {
  if (std::find(outputs_.begin(), outputs_.end(), name) == outputs_.end()) outputs_.push_back(name);
  return out_dir_ / name;
}

void Context::write_csv(const std::string& name, const io::CsvTable& table) { io::write_csv(output(name), table); }

void Context::write_json(const std::string& name, const nlohmann::json& j) { io::write_text(output(name), j.dump(2) + "\n"); }

}  // namespace qpinem::cli
