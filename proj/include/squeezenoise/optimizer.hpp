#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "squeezenoise/damping_data.hpp"
#include "squeezenoise/noise.hpp"

/**
 * @file optimizer.hpp
 * @brief Spring-constant selection for a resonant sensor.
 *
 * With the proof mass fixed, k_s is the design knob. Each candidate is scored
 * by a weighted objective (weights normalized to sum to one):
 *
 *   J(k_s) = w_snr  * ln(band-integrated output SNR over [f1, f2])
 *          + w_sens * ln(peak |m / D(jw)| over [f1, f2])
 *          - w_bw   * |BW_3dB - BW_target| / BW_target
 *          + penalty
 *
 * The output SNR integrates displacement signal and noise power in the band
 * for a flat input acceleration density. BW_3dB is measured on |m / D| around
 * the in-band peak. `penalty` is kResonancePenalty when the gas-loaded
 * resonance w^2 m = k_s + k_d(w) has no root inside the damping table,
 * otherwise zero.
 */

namespace sqn {

inline constexpr double kResonancePenalty = -1.0e6;

struct ObjectiveConfig {
  double weight_snr = 1.0;
  double weight_sensitivity = 0.0;
  double weight_bandwidth = 0.0;
  double f_lo_hz = 0.0;
  double f_hi_hz = 0.0;
  double target_bandwidth_hz = 0.0;  // required when weight_bandwidth > 0
  double k_min = 0.0;
  double k_max = 0.0;
  double signal_accel = 1.0;  // flat input acceleration density, (m/s^2)/sqrt(Hz)
  std::optional<double> electrical_noise_floor;  // m/sqrt(Hz), comparison only
  std::size_t band_points = 400;
  std::size_t grid_points = 200;

  /// Band must lie inside [domain_lo, domain_hi]. Throws ConfigError.
  void validate(double domain_lo, double domain_hi) const;
};

struct ObjectiveBreakdown {
  double snr_term = 0.0;
  double sensitivity_term = 0.0;
  double bandwidth_term = 0.0;
  double penalty = 0.0;
  double band_snr = 0.0;      // linear band-integrated output SNR
  double peak_gain = 0.0;     // max |m/D| in band [s^2]
  double peak_hz = 0.0;
  // -3 dB width around the in-band peak; only measured when the bandwidth
  // weight is set (and always for the final DesignResult).
  double bandwidth_hz = 0.0;
  bool bandwidth_truncated = false;  // a -3 dB edge fell outside the table
  bool resonance_in_domain = true;
  std::optional<double> resonance_hz;

  /// Sum of the four weighted terms, always in the same order.
  double total() const { return snr_term + sensitivity_term + bandwidth_term + penalty; }
};

struct ObjectiveValue {
  double value = 0.0;
  ObjectiveBreakdown breakdown;
};

struct DesignResult {
  double k_s_opt = 0.0;
  std::optional<double> resonance_hz;
  double objective_value = 0.0;
  ObjectiveBreakdown breakdown;
  bool on_boundary = false;
  std::optional<double> z_noise_at_resonance;  // m/sqrt(Hz)
  std::optional<double> electrical_noise_floor;
};

/// Solves w^2 m = k_s + k_d(w) inside the table domain by damped fixed-point
/// iteration, falling back to bracketing + bisection. Throws
/// NoResonanceInBand.
double resonance_frequency(const DampingInterpolant& interp, double mass_kg, double k_spring);

ObjectiveValue objective_eval(const ObjectiveConfig& cfg, const DampingInterpolant& interp,
                              double mass_kg, double temperature_k, double k_spring);

/// Log-grid scan over [k_min, k_max] then golden-section refinement of the
/// best bracket.
DesignResult optimize_spring(const ObjectiveConfig& cfg, const DampingInterpolant& interp,
                             double mass_kg, double temperature_k);

/// Maximizes a unimodal f on [a, b] to an absolute tolerance `tol`; returns
/// the abscissa.
double golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                               double tol);

std::string design_to_json(const DesignResult& result, const ObjectiveConfig& cfg);
std::string design_summary(const DesignResult& result);

}  // namespace sqn
