#include "pattern_oracle/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pattern_oracle {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& v, int line) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty())
    throw ConfigError("expected a number, got '" + v + "'", line);
  return d;
}

std::uint64_t to_uint(const std::string& v, int line) {
  std::size_t used = 0;
  std::uint64_t n = 0;
  try {
    if (!v.empty() && v[0] != '-') n = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty())
    throw ConfigError("expected a non-negative integer, got '" + v + "'", line);
  return n;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("expected true or false, got '" + v + "'", line);
}

}  // namespace

std::optional<OutputFormat> parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "text") return OutputFormat::Text;
  if (s == "csv") return OutputFormat::Csv;
  return std::nullopt;
}

EngineConfig GlobalConfig::engine_config() const {
  EngineConfig cfg;
  if (epsilon) cfg.epsilon = *epsilon;
  if (theta) cfg.theta = *theta;
  if (beam_width) cfg.beam_width = *beam_width;
  if (consistency_filter) cfg.consistency_filter = *consistency_filter;
  return cfg;
}

GlobalConfig parse_config(const std::string& text) {
  GlobalConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = unquote(trim(s.substr(eq + 1)));
    if (key == "epsilon") {
      cfg.epsilon = to_double(value, line);
      if (!(*cfg.epsilon > 0)) throw ConfigError("epsilon must be > 0", line);
    } else if (key == "theta") {
      cfg.theta = to_double(value, line);
      if (*cfg.theta < 0 || *cfg.theta > 1)
        throw ConfigError("theta must be in [0, 1]", line);
    } else if (key == "beam_width") {
      cfg.beam_width = to_uint(value, line);
      if (*cfg.beam_width == 0) throw ConfigError("beam_width must be >= 1", line);
    } else if (key == "consistency_filter") {
      cfg.consistency_filter = to_bool(value, line);
    } else if (key == "seed") {
      cfg.seed = to_uint(value, line);
    } else if (key == "format") {
      cfg.format = parse_format(value);
      if (!cfg.format) throw ConfigError("format must be json, text or csv", line);
    } else {
      throw ConfigError("unknown key '" + key + "'", line);
    }
  }
  return cfg;
}

GlobalConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

GlobalConfig config_from_env() {
  const char* path = std::getenv(kConfigEnvVar);
  if (!path || !*path) return {};
  return load_config(path);
}

GlobalConfig merge(GlobalConfig base, const GlobalConfig& over) {
  if (over.epsilon) base.epsilon = over.epsilon;
  if (over.theta) base.theta = over.theta;
  if (over.beam_width) base.beam_width = over.beam_width;
  if (over.consistency_filter) base.consistency_filter = over.consistency_filter;
  if (over.seed) base.seed = over.seed;
  if (over.format) base.format = over.format;
  return base;
}

}  // namespace pattern_oracle
