#include "squeezenoise/config.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "squeezenoise/errors.hpp"

namespace sqn {

namespace {

toml::table parse_table(std::string_view text, std::string_view what) {
  try {
    return toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << what << ": " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(msg.str());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double number_at(const toml::table& t, std::string_view section, std::string_view key) {
  const auto node = t[section][key];
  const std::string name = std::string(section) + "." + std::string(key);
  if (!node) throw ConfigError("missing field '" + name + "'");
  if (auto v = node.value<double>()) return *v;
  throw ConfigError("field '" + name + "' must be a number");
}

double number_or(const toml::table& t, std::string_view section, std::string_view key,
                 double fallback) {
  if (!t[section][key]) return fallback;
  return number_at(t, section, key);
}

std::optional<double> optional_number(const toml::table& t, std::string_view section,
                                      std::string_view key) {
  if (!t[section][key]) return std::nullopt;
  return number_at(t, section, key);
}

std::size_t count_or(const toml::table& t, std::string_view section, std::string_view key,
                     std::size_t fallback) {
  const auto node = t[section][key];
  if (!node) return fallback;
  const std::string name = std::string(section) + "." + std::string(key);
  auto v = node.value<std::int64_t>();
  if (!v || *v <= 0) throw ConfigError("field '" + name + "' must be a positive integer");
  return static_cast<std::size_t>(*v);
}

// Re-raises ConfigError with the TOML key in place of the struct field name.
template <typename F>
void validate_with_prefix(const std::string& section, F&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    throw ConfigError(section + "." + e.what());
  }
}

}  // namespace

GeometryConfig parse_geometry_toml(std::string_view text) {
  const toml::table t = parse_table(text, "geometry file");
  GeometryConfig cfg;
  cfg.plate.length_m = number_at(t, "plate", "length_m");
  cfg.plate.width_m = number_at(t, "plate", "width_m");
  cfg.plate.gap_m = number_at(t, "plate", "gap_m");
  cfg.gas.pressure_pa = number_at(t, "gas", "pressure_pa");
  cfg.gas.viscosity_pa_s = number_at(t, "gas", "viscosity_pa_s");
  cfg.gas.temperature_k = number_or(t, "gas", "temperature_k", cfg.gas.temperature_k);
  cfg.truncation.max_index = static_cast<int>(count_or(t, "series", "max_index", 49));
  validate_with_prefix("plate", [&] { cfg.plate.validate(); });
  validate_with_prefix("gas", [&] { cfg.gas.validate(); });
  validate_with_prefix("series", [&] { cfg.truncation.validate(); });
  return cfg;
}

GeometryConfig load_geometry_toml(const std::string& path) {
  return parse_geometry_toml(read_file(path));
}

ObjectiveConfig parse_objective_toml(std::string_view text) {
  const toml::table t = parse_table(text, "objective file");
  ObjectiveConfig cfg;
  cfg.weight_snr = number_or(t, "weights", "snr", 0.0);
  cfg.weight_sensitivity = number_or(t, "weights", "sensitivity", 0.0);
  cfg.weight_bandwidth = number_or(t, "weights", "bandwidth", 0.0);
  cfg.f_lo_hz = number_at(t, "band", "f_lo_hz");
  cfg.f_hi_hz = number_at(t, "band", "f_hi_hz");
  cfg.target_bandwidth_hz = number_or(t, "band", "target_bandwidth_hz", 0.0);
  cfg.band_points = count_or(t, "band", "points", cfg.band_points);
  cfg.k_min = number_at(t, "search", "k_min");
  cfg.k_max = number_at(t, "search", "k_max");
  cfg.grid_points = count_or(t, "search", "grid_points", cfg.grid_points);
  cfg.signal_accel = number_or(t, "signal", "accel", cfg.signal_accel);
  cfg.electrical_noise_floor = optional_number(t, "signal", "electrical_noise_floor");
  cfg.validate(0.0, std::numeric_limits<double>::infinity());
  return cfg;
}

ObjectiveConfig load_objective_toml(const std::string& path) {
  return parse_objective_toml(read_file(path));
}

}  // namespace sqn
