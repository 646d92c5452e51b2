#pragma once

#include <span>

#include "squeezenoise/damping_data.hpp"

/**
 * @file squeeze_film.hpp
 * @brief Closed-form squeeze-film forces on a rigid rectangular plate.
 *
 * Small-amplitude linearized Reynolds-equation solution (double Fourier
 * series over odd modes). The film force on a plate oscillating with
 * displacement amplitude z at angular frequency w splits into
 *
 *   F = (k_d(w) + j w b(w)) z
 *
 * with the squeeze number sigma = 12 mu w W^2 / (P g0^2) and
 *
 *   b(w)   = 64 sigma P A / (pi^6 w g0)   * S_d(sigma, beta)
 *   k_d(w) = 64 sigma^2 P A / (pi^8 g0)   * S_s(sigma, beta)
 *
 *   S_d = sum_{m,n odd} (m^2 + (n/beta)^2) / ((mn)^2 [(m^2 + (n/beta)^2)^2 + sigma^2/pi^4])
 *   S_s = sum_{m,n odd} 1                  / ((mn)^2 [(m^2 + (n/beta)^2)^2 + sigma^2/pi^4])
 *
 * Coefficients are per unit displacement, so they do not depend on the
 * motion amplitude.
 */

namespace sqn {

struct PlateGeometry {
  double length_m = 0.0;  // L, long side
  double width_m = 0.0;   // W, short side (W <= L)
  double gap_m = 0.0;     // nominal film thickness g0

  /// Throws ConfigError naming the offending field.
  void validate() const;
  double beta() const { return length_m / width_m; }
  double area() const { return length_m * width_m; }
};

struct GasProperties {
  double pressure_pa = 101325.0;
  double viscosity_pa_s = 1.85e-5;
  double temperature_k = 300.0;

  void validate() const;
};

/// Odd-mode cutoff. Mode m runs over 1, 3, ..., max_index; mode n (along the
/// long side) runs up to ceil(beta * max_index) so that the cutoff resolves
/// the same wavelength in both directions.
struct SeriesTruncation {
  int max_index = 49;

  void validate() const;
};

double squeeze_number(const PlateGeometry& geom, const GasProperties& gas, double omega);

double damping_series_sum(double sigma, double beta, SeriesTruncation trunc = {});
double elastic_series_sum(double sigma, double beta, SeriesTruncation trunc = {});

/// Damping coefficient b(w) [N s/m]. Evaluated through the constant sigma/w
/// ratio, so omega == 0 returns the viscous (incompressible) limit.
double damping_coefficient(const PlateGeometry& geom, const GasProperties& gas, double omega,
                           SeriesTruncation trunc = {});

/// Gas spring k_d(w) [N/m]; zero at DC, tends to P A / g0 as sigma grows.
double spring_coefficient(const PlateGeometry& geom, const GasProperties& gas, double omega,
                          SeriesTruncation trunc = {});

/// Samples both coefficients on a strictly increasing grid of positive
/// frequencies [Hz]. Throws ConfigError on an empty or invalid grid.
DampingSpectrum synth_spectrum(const PlateGeometry& geom, const GasProperties& gas,
                               std::span<const double> grid_hz, SeriesTruncation trunc = {});

}  // namespace sqn
