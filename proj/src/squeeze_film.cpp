#include "squeezenoise/squeeze_film.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "squeezenoise/errors.hpp"

namespace sqn {

namespace {

using std::numbers::pi;

constexpr double kPi4 = pi * pi * pi * pi;
constexpr double kPi6 = kPi4 * pi * pi;
constexpr double kPi8 = kPi4 * kPi4;

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(field) + " must be a finite positive number");
  }
}

int long_side_cutoff(int max_index, double beta) {
  int n = static_cast<int>(std::ceil(beta * max_index - 1e-9));
  if (n % 2 == 0) ++n;
  return n;
}

// Both sums share the same denominators; accumulate them in one sweep.
struct ModeSums {
  double damping = 0.0;
  double elastic = 0.0;
};

ModeSums mode_sums(double sigma, double beta, SeriesTruncation trunc) {
  trunc.validate();
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("squeeze number must be finite and non-negative");
  }
  if (!(beta >= 1.0) || !std::isfinite(beta)) {
    throw ConfigError("aspect ratio beta must be >= 1");
  }
  const double s2 = sigma * sigma / kPi4;
  const int n_max = long_side_cutoff(trunc.max_index, beta);
  ModeSums sums;
  // Smallest terms first keeps the accumulation error well below the
  // truncation error.
  for (int m = trunc.max_index; m >= 1; m -= 2) {
    const double m2 = static_cast<double>(m) * m;
    for (int n = n_max; n >= 1; n -= 2) {
      const double nb = n / beta;
      const double x = m2 + nb * nb;
      const double mn = static_cast<double>(m) * n;
      const double den = mn * mn * (x * x + s2);
      sums.damping += x / den;
      sums.elastic += 1.0 / den;
    }
  }
  return sums;
}

void validate_omega(double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw ConfigError("angular frequency must be finite and non-negative");
  }
}

}  // namespace

void PlateGeometry::validate() const {
  require_positive(length_m, "length_m");
  require_positive(width_m, "width_m");
  require_positive(gap_m, "gap_m");
  if (width_m > length_m) {
    throw ConfigError("width_m must not exceed length_m (beta = L/W >= 1)");
  }
}

void GasProperties::validate() const {
  require_positive(pressure_pa, "pressure_pa");
  require_positive(viscosity_pa_s, "viscosity_pa_s");
  require_positive(temperature_k, "temperature_k");
}

void SeriesTruncation::validate() const {
  if (max_index < 1 || max_index % 2 == 0) {
    throw ConfigError("max_index must be an odd integer >= 1");
  }
}

double squeeze_number(const PlateGeometry& geom, const GasProperties& gas, double omega) {
  geom.validate();
  gas.validate();
  validate_omega(omega);
  const double w = geom.width_m;
  const double g = geom.gap_m;
  return 12.0 * gas.viscosity_pa_s * omega * w * w / (gas.pressure_pa * g * g);
}

double damping_series_sum(double sigma, double beta, SeriesTruncation trunc) {
  return mode_sums(sigma, beta, trunc).damping;
}

double elastic_series_sum(double sigma, double beta, SeriesTruncation trunc) {
  return mode_sums(sigma, beta, trunc).elastic;
}

double damping_coefficient(const PlateGeometry& geom, const GasProperties& gas, double omega,
                           SeriesTruncation trunc) {
  const double sigma = squeeze_number(geom, gas, omega);
  // 64 sigma P A / (pi^6 w g0) with sigma / w = 12 mu W^2 / (P g0^2).
  const double w = geom.width_m;
  const double g = geom.gap_m;
  const double prefactor = 768.0 * gas.viscosity_pa_s * w * w * geom.area() / (kPi6 * g * g * g);
  return prefactor * damping_series_sum(sigma, geom.beta(), trunc);
}

double spring_coefficient(const PlateGeometry& geom, const GasProperties& gas, double omega,
                          SeriesTruncation trunc) {
  const double sigma = squeeze_number(geom, gas, omega);
  if (sigma == 0.0) return 0.0;
  const double prefactor = 64.0 * sigma * sigma * gas.pressure_pa * geom.area() / (kPi8 * geom.gap_m);
  return prefactor * elastic_series_sum(sigma, geom.beta(), trunc);
}

DampingSpectrum synth_spectrum(const PlateGeometry& geom, const GasProperties& gas,
                               std::span<const double> grid_hz, SeriesTruncation trunc) {
  if (grid_hz.empty()) throw ConfigError("frequency grid is empty");
  geom.validate();
  gas.validate();
  trunc.validate();
  std::vector<DampingRow> rows;
  rows.reserve(grid_hz.size());
  for (std::size_t i = 0; i < grid_hz.size(); ++i) {
    const double f = grid_hz[i];
    if (!(f > 0.0) || !std::isfinite(f)) throw ConfigError("grid frequencies must be positive");
    if (i > 0 && !(f > grid_hz[i - 1])) throw ConfigError("grid must be strictly increasing");
    const double omega = 2.0 * pi * f;
    rows.push_back({f, damping_coefficient(geom, gas, omega, trunc),
                    spring_coefficient(geom, gas, omega, trunc)});
  }
  return DampingSpectrum(std::move(rows), "synthetic");
}

}  // namespace sqn
