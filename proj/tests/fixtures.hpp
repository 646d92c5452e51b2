#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "squeezenoise/damping_data.hpp"
#include "squeezenoise/macromodel.hpp"
#include "squeezenoise/squeeze_film.hpp"

namespace fixtures {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 300 um square plate, 5 um gap, 1 kPa: crossover near 4 kHz.
inline sqn::PlateGeometry square_plate() { return {300e-6, 300e-6, 5e-6}; }
inline sqn::GasProperties low_pressure_air() { return {1000.0, 1.85e-5, 300.0}; }

inline sqn::DampingSpectrum square_plate_spectrum(double f_lo = 10.0, double f_hi = 1e6,
                                                  std::size_t points = 100) {
  return sqn::synth_spectrum(square_plate(), low_pressure_air(), sqn::log_grid(f_lo, f_hi, points));
}

inline sqn::DampingSpectrum constant_spectrum(double b, double kd, double f_lo = 10.0,
                                              double f_hi = 1e6, std::size_t points = 50) {
  std::vector<sqn::DampingRow> rows;
  for (double f : sqn::log_grid(f_lo, f_hi, points)) rows.push_back({f, b, kd});
  return sqn::DampingSpectrum(rows, "constant");
}

// Damping table whose film admittance is exactly that of `model`.
inline sqn::DampingSpectrum spectrum_from_model(const sqn::LumpedRLModel& model, double f_lo,
                                                double f_hi, std::size_t points) {
  std::vector<sqn::DampingRow> rows;
  for (double f : sqn::log_grid(f_lo, f_hi, points)) {
    const auto y = 1.0 / sqn::model_impedance(model, kTwoPi * f);
    rows.push_back({f, y.real(), -y.imag() * kTwoPi * f});
  }
  return sqn::DampingSpectrum(rows, "planted");
}

inline std::vector<sqn::SeriesRLPoint> samples_from_model(const sqn::LumpedRLModel& model,
                                                          double f_lo, double f_hi,
                                                          std::size_t points) {
  std::vector<sqn::SeriesRLPoint> pts;
  for (double f : sqn::log_grid(f_lo, f_hi, points)) {
    const double w = kTwoPi * f;
    const auto z = sqn::model_impedance(model, w);
    pts.push_back({w, z.real(), z.imag() / w});
  }
  return pts;
}

}  // namespace fixtures
