#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "squeezenoise/damping_data.hpp"
#include "squeezenoise/errors.hpp"
#include "squeezenoise/noise.hpp"

/**
 * @file macromodel.hpp
 * @brief Frequency-independent lumped model of the gas film.
 *
 * Mobility analogy throughout: force is the through variable (current),
 * velocity the across variable (voltage). The film admittance is
 * Y_d = b - j k_d / w; its inverse Z_air = R(w) + j w L(w) is approximated by
 * parallel R-L stages connected in series,
 *
 *   Z(jw) = sum_k j w l_k r_k / (r_k + j w l_k),
 *
 * whose resistors are the only noise generators.
 */

namespace sqn {

struct AirAdmittancePoint {
  double omega = 0.0;
  double y_real = 0.0;  // b
  double y_imag = 0.0;  // -k_d / w

  std::complex<double> value() const { return {y_real, y_imag}; }
};

struct SeriesRLPoint {
  double omega = 0.0;
  double r_air = 0.0;
  double l_air = 0.0;

  std::complex<double> impedance() const { return {r_air, omega * l_air}; }
};

struct RLBranch {
  double r = 0.0;
  double l = 0.0;

  double corner_omega() const { return r / l; }
};

struct LumpedRLModel {
  std::vector<RLBranch> branches;
  double f_lo_hz = 0.0;
  double f_hi_hz = 0.0;
  double fit_residual = 0.0;  // RMS of per-point relative complex error

  /// Passivity (all r, l > 0) and strictly increasing corner frequencies.
  void validate() const;
};

class FitError : public Error {
 public:
  FitError(const std::string& what, LumpedRLModel best) : Error(what), best_(std::move(best)) {}
  const LumpedRLModel& best() const { return best_; }

 private:
  LumpedRLModel best_;
};

AirAdmittancePoint air_admittance(DampingPoint p, double omega);
AirAdmittancePoint air_admittance(const DampingInterpolant& interp, double freq_hz);

/// Z = 1/Y as a series resistance and inductance. Throws DegenerateAdmittance
/// when Y == 0.
SeriesRLPoint series_rl(const AirAdmittancePoint& y);

/// Back from the series form to (b, k_d).
DampingPoint damping_from_series(const SeriesRLPoint& z);

std::complex<double> model_impedance(const LumpedRLModel& model, double omega);
std::complex<double> branch_impedance(const RLBranch& branch, double omega);

struct FitOptions {
  std::size_t n_branches = 3;
  std::size_t starts = 8;
  std::uint64_t seed = 0x5eed5eedULL;
  int max_evaluations = 20000;
  /// Reject the best fit (FitError) above this residual.
  double max_residual = std::numeric_limits<double>::infinity();
};

/// Relative complex least squares in log-parameters, multi-start. Points must
/// number at least 2 * n_branches and span at least one decade. Throws
/// FitError when no start converges or the residual exceeds max_residual.
LumpedRLModel fit_branches(std::span<const SeriesRLPoint> points, const FitOptions& options = {});

/// Series-RL samples of the film on `freq_hz`.
std::vector<SeriesRLPoint> series_rl_samples(const DampingInterpolant& interp,
                                             std::span<const double> freq_hz);

/// Port force-noise PSD 4 k_B T Re{1/Z(jw)} [N^2/Hz].
double model_noise_psd(const LumpedRLModel& model, double temperature_k, double omega);

/// Each resistor's contribution to the port short-circuit noise; sums to
/// model_noise_psd.
std::vector<double> resistor_noise_psd(const LumpedRLModel& model, double temperature_k,
                                       double omega);

/// `.SUBCKT` netlist: mass capacitor, spring inductor and the film stages.
std::string export_spice(const LumpedRLModel& model, const ResonatorParams& params);

/// `rlmodel/1` JSON.
std::string model_to_json(const LumpedRLModel& model);
LumpedRLModel model_from_json(std::string_view text);

}  // namespace sqn
