#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "pattern_oracle/candidate_engine.hpp"

namespace pattern_oracle {

inline constexpr const char* kConfigEnvVar = "PATTERN_ORACLE_CONFIG";

enum class OutputFormat { Json, Text, Csv };

// Settings shared by every command. Unset fields keep module defaults.
struct GlobalConfig {
  std::optional<double> epsilon;
  std::optional<double> theta;
  std::optional<std::size_t> beam_width;
  std::optional<bool> consistency_filter;
  std::optional<std::uint64_t> seed;
  std::optional<OutputFormat> format;

  EngineConfig engine_config() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string message, int line = 0)
      : std::runtime_error(std::move(message)), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// key = value lines; blank lines and lines starting with # are ignored.
// Keys: epsilon, theta, beam_width, consistency_filter, seed, format.
GlobalConfig parse_config(const std::string& text);
GlobalConfig load_config(const std::filesystem::path& path);
// Reads the file named by PATTERN_ORACLE_CONFIG, or an empty config.
GlobalConfig config_from_env();

// Fields set in `over` replace those in `base`.
GlobalConfig merge(GlobalConfig base, const GlobalConfig& over);

std::optional<OutputFormat> parse_format(const std::string& s);

}  // namespace pattern_oracle
