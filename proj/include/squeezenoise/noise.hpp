#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "squeezenoise/damping_data.hpp"

/**
 * @file noise.hpp
 * @brief Mechano-thermal noise of a single-axis resonator with frequency
 * dependent gas damping.
 *
 * Every dissipative coefficient b(f) carries a fluctuating force with one-sided
 * density sqrt(4 k_B T b(f)). The proof mass sees
 *
 *   D(jw) = k_s + k_d(w) + j w b(w) - w^2 m
 *
 * so the input-referred acceleration noise is sqrt(4 k_B T b)/m and the
 * displacement noise is sqrt(4 k_B T b)/|D|. Signal and noise are kept as
 * separate densities; they are never added as phasors.
 */

namespace sqn {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K, exact SI

struct ResonatorParams {
  double mass_kg = 0.0;
  double k_spring_n_per_m = 0.0;
  double temperature_k = 300.0;

  void validate() const;
};

/// sqrt(4 k_B T b) [N/sqrt(Hz)].
double force_noise_density(double b, double temperature_k);

// Pointwise forms on an explicit (b, k_d) sample; the interpolant overloads
// below look the sample up first.
double input_accel_noise(DampingPoint p, const ResonatorParams& params);
std::complex<double> mechanical_tf(DampingPoint p, const ResonatorParams& params, double omega);
double displacement_noise(DampingPoint p, const ResonatorParams& params, double omega);
double displacement_signal(double accel_ext, DampingPoint p, const ResonatorParams& params,
                           double omega);
double snr_input(double accel_ext, DampingPoint p, const ResonatorParams& params);

double input_accel_noise(const DampingInterpolant& interp, const ResonatorParams& params,
                         double freq_hz);
/// m |A_ext| / sqrt(4 k_B T b): per-sqrt(Hz) density ratio.
double snr_input(double accel_ext, const DampingInterpolant& interp,
                 const ResonatorParams& params, double freq_hz);
std::complex<double> mechanical_tf(const DampingInterpolant& interp,
                                   const ResonatorParams& params, double freq_hz);
double displacement_noise(const DampingInterpolant& interp, const ResonatorParams& params,
                          double freq_hz);
double displacement_signal(double accel_ext, const DampingInterpolant& interp,
                           const ResonatorParams& params, double freq_hz);

/// Gas forces relative to the mechanical restoring force.
struct ForceRatios {
  double damping = 0.0;  // w b / k_s
  double elastic = 0.0;  // k_d / k_s
};
ForceRatios force_ratios(const DampingInterpolant& interp, const ResonatorParams& params,
                         double freq_hz);

/// Where the frozen damping value of the white model is read.
struct AnchorRule {
  std::optional<double> freq_hz;  // nullopt: lowest-frequency row

  static AnchorRule lowest() { return {}; }
  static AnchorRule at(double f) { return {f}; }
};

/// Classical constant-b table over the same grid, with the gas spring removed.
DampingSpectrum white_baseline(const DampingSpectrum& spec, AnchorRule anchor = {});

struct NoiseRecord {
  double freq_hz = 0.0;
  double f_noise = 0.0;  // N/sqrt(Hz)
  double a_noise = 0.0;  // (m/s^2)/sqrt(Hz)
  double z_noise = 0.0;  // m/sqrt(Hz)
  std::optional<double> snr;
  double f_noise_white = 0.0;
  double a_noise_white = 0.0;
  double z_noise_white = 0.0;
  std::optional<double> snr_white;
};

struct NoiseSpectra {
  std::vector<NoiseRecord> rows;
  double white_b = 0.0;  // damping value frozen in the white model

  bool has_snr() const { return !rows.empty() && rows.front().snr.has_value(); }
};

/// Evaluates every spectrum at `freq_hz`. When `accel_ext` is given (flat
/// input acceleration density) the SNR columns are filled as well.
NoiseSpectra compute_spectra(const DampingSpectrum& spec, const ResonatorParams& params,
                             std::span<const double> freq_hz, AnchorRule anchor = {},
                             std::optional<double> accel_ext = std::nullopt);

/// CSV with the `freq_hz,f_noise_n_rthz,...` header (+ `snr` when present).
std::string export_noise_csv(const NoiseSpectra& spectra);

/// Band-integrated amplitude ratio sqrt(int signal^2 df / int noise^2 df),
/// trapezoidal in ln f (df = f dln f). Grid must be strictly increasing.
double band_integrated_ratio(std::span<const double> freq_hz, std::span<const double> signal,
                             std::span<const double> noise);

}  // namespace sqn
