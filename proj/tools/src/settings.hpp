#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpinem/io.hpp"

namespace qpinem::cli {

enum class Kind { number, integer, text, list, boolean };

// One command parameter. An empty fallback means "unset" unless given.
struct ParamSpec {
  std::string key;
  Kind kind;
  std::string fallback;
  std::string help;
};

// Typed parameter values: flag text wins over the config file, which wins
// over the fallback.
class Settings {
 public:
  Settings(const std::vector<ParamSpec>& specs, const nlohmann::json& config,
           const std::map<std::string, std::string>& flags);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;
  bool boolean(const std::string& key) const;
  const nlohmann::json& resolved() const { return resolved_; }

 private:
  const nlohmann::json& at(const std::string& key) const;
  nlohmann::json resolved_ = nlohmann::json::object();
};

// Output directory plus the list of files written, for the manifest.
class Context {
 public:
  Context(std::filesystem::path out_dir, std::uint64_t seed, int threads, std::ostream& log)
      : out_dir_(std::move(out_dir)), seed_(seed), threads_(threads), log_(log) {}

  std::uint64_t seed() const { return seed_; }
  int threads() const { return threads_; }
  std::ostream& log() { return log_; }
  const std::filesystem::path& dir() const { return out_dir_; }

  // Registers the file name and returns its full path.
  std::filesystem::path output(const std::string& name);
  void write_csv(const std::string& name, const io::CsvTable& table);
  void write_json(const std::string& name, const nlohmann::json& j);
  const std::vector<std::string>& outputs() const { return outputs_; }

 private:
  std::filesystem::path out_dir_;
  std::uint64_t seed_;
  int threads_;
  std::ostream& log_;
  std::vector<std::string> outputs_;
};

// Parses "a,b,c" or "start:stop:count" (inclusive, evenly spaced).
std::vector<double> parse_list(const std::string& text, const std::string& key);
double parse_number(const std::string& text, const std::string& key);

}  // namespace qpinem::cli
