#pragma once

#include <string>
#include <string_view>

#include "squeezenoise/optimizer.hpp"
#include "squeezenoise/squeeze_film.hpp"

// TOML readers for the geometry/gas and objective files. Every failure is a
// ConfigError whose message names the offending key.
//
// Geometry file:
//   [plate]  length_m, width_m, gap_m
//   [gas]    pressure_pa, viscosity_pa_s, temperature_k
//   [series] max_index            (optional, default 49)
//
// Objective file:
//   [weights] snr, sensitivity, bandwidth
//   [band]    f_lo_hz, f_hi_hz, target_bandwidth_hz, points
//   [search]  k_min, k_max, grid_points
//   [signal]  accel, electrical_noise_floor   (optional)

namespace sqn {

struct GeometryConfig {
  PlateGeometry plate;
  GasProperties gas;
  SeriesTruncation truncation;
};

GeometryConfig parse_geometry_toml(std::string_view text);
GeometryConfig load_geometry_toml(const std::string& path);

ObjectiveConfig parse_objective_toml(std::string_view text);
ObjectiveConfig load_objective_toml(const std::string& path);

}  // namespace sqn
