#include "squeezenoise/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "squeezenoise/errors.hpp"

namespace sqn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvPhi = 0.6180339887498948482;  // 1/phi
constexpr double kHalfPower = 0.70710678118654752440;

double gain(const DampingInterpolant& interp, double mass, double k_spring, double f) {
  const ResonatorParams p{mass, k_spring, 1.0};
  return mass / std::abs(mechanical_tf(interp, p, f));
}

// Finds where |m/D| falls to `level`, walking from `f_peak` towards `f_edge`
// (either direction) in geometric steps and then bisecting in ln f. Returns
// the edge itself when the level is never reached.
double half_power_edge(const DampingInterpolant& interp, double mass, double k_spring,
                       double f_peak, double f_edge, double level, bool& truncated) {
  const double step = std::pow(2.0, 1.0 / 32.0);
  const bool up = f_edge > f_peak;
  double inside = f_peak;
  double outside = f_peak;
  while (true) {
    double next = up ? outside * step : outside / step;
    if (up ? next >= f_edge : next <= f_edge) next = f_edge;
    if (gain(interp, mass, k_spring, next) <= level) {
      outside = next;
      break;
    }
    inside = next;
    if (next == f_edge) {
      truncated = true;
      return f_edge;
    }
    outside = next;
  }
  double a = std::log(inside);
  double b = std::log(outside);
  for (int i = 0; i < 100 && std::abs(b - a) > 1e-13; ++i) {
    const double mid = 0.5 * (a + b);
    if (gain(interp, mass, k_spring, std::exp(mid)) > level) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace

void ObjectiveConfig::validate(double domain_lo, double domain_hi) const {
  auto nonneg = [](double w, const char* name) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError(std::string(name) + " must be >= 0");
  };
  nonneg(weight_snr, "weights.snr");
  nonneg(weight_sensitivity, "weights.sensitivity");
  nonneg(weight_bandwidth, "weights.bandwidth");
  if (weight_snr + weight_sensitivity + weight_bandwidth <= 0.0) {
    throw ConfigError("at least one objective weight must be positive");
  }
  if (!(f_lo_hz > 0.0) || !(f_lo_hz < f_hi_hz)) {
    throw ConfigError("operating band requires 0 < f_lo_hz < f_hi_hz");
  }
  if (f_lo_hz < domain_lo || f_hi_hz > domain_hi) {
    throw DomainError("operating band outside damping table range");
  }
  if (!(k_min > 0.0) || !(k_min <= k_max) || !std::isfinite(k_max)) {
    throw ConfigError("search range requires 0 < k_min <= k_max");
  }
  if (weight_bandwidth > 0.0 && !(target_bandwidth_hz > 0.0)) {
    throw ConfigError("target_bandwidth_hz must be positive when the bandwidth weight is set");
  }
  if (!(signal_accel > 0.0)) throw ConfigError("signal_accel must be positive");
  if (band_points < 2) throw ConfigError("band_points must be >= 2");
  if (grid_points < 3) throw ConfigError("grid_points must be >= 3");
}

double golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                               double tol) {
  if (a > b) std::swap(a, b);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double resonance_frequency(const DampingInterpolant& interp, double mass_kg, double k_spring) {
  if (!(mass_kg > 0.0) || !(k_spring > 0.0)) throw ConfigError("mass and spring must be positive");
  auto residual = [&](double f) {
    const double w = kTwoPi * f;
    return w * w * mass_kg - k_spring - interp(f).kd;
  };
  auto fixed_map = [&](double f) { return std::sqrt((k_spring + interp(f).kd) / mass_kg) / kTwoPi; };
  auto satisfied = [&](double f) {
    const double w = kTwoPi * f;
    return std::abs(residual(f)) <= 1e-12 * w * w * mass_kg;
  };

  const double f0 = std::sqrt(k_spring / mass_kg) / kTwoPi;
  if (interp.contains(f0)) {
    double f = f0;
    for (int it = 0; it < 200; ++it) {
      const double g = fixed_map(f);
      if (!interp.contains(g)) break;
      const double next = 0.5 * (f + g);
      if (std::abs(next - f) <= 1e-15 * f) {
        f = next;
        break;
      }
      f = next;
    }
    if (interp.contains(f) && satisfied(f)) return f;
  }

  // Bracket the first sign change of the residual on a log scan of the table.
  const std::vector<double> scan = log_grid(interp.f_min(), interp.f_max(), 512);
  double prev_f = scan.front();
  double prev_r = residual(prev_f);
  if (prev_r == 0.0) return prev_f;
  if (prev_r > 0.0) {
    throw NoResonanceInBand("gas-loaded resonance lies below the damping table (" +
                            std::to_string(interp.f_min()) + " Hz)");
  }
  for (std::size_t i = 1; i < scan.size(); ++i) {
    const double r = residual(scan[i]);
    if (r >= 0.0) {
      double a = std::log(prev_f);
      double b = std::log(scan[i]);
      for (int k = 0; k < 200 && b - a > 1e-15 * std::abs(b); ++k) {
        const double mid = 0.5 * (a + b);
        if (residual(std::exp(mid)) < 0.0) {
          a = mid;
        } else {
          b = mid;
        }
      }
      return std::exp(0.5 * (a + b));
    }
    prev_f = scan[i];
  }
  throw NoResonanceInBand("gas-loaded resonance lies above the damping table (" +
                          std::to_string(interp.f_max()) + " Hz)");
}

namespace {

ObjectiveValue evaluate(const ObjectiveConfig& cfg, const DampingInterpolant& interp,
                        double mass_kg, double temperature_k, double k_spring,
                        bool measure_bandwidth) {
  const double w_sum = cfg.weight_snr + cfg.weight_sensitivity + cfg.weight_bandwidth;
  const double w_snr = cfg.weight_snr / w_sum;
  const double w_sens = cfg.weight_sensitivity / w_sum;
  const double w_bw = cfg.weight_bandwidth / w_sum;
  const ResonatorParams params{mass_kg, k_spring, temperature_k};

  ObjectiveBreakdown br;
  try {
    br.resonance_hz = resonance_frequency(interp, mass_kg, k_spring);
  } catch (const NoResonanceInBand&) {
    br.resonance_in_domain = false;
    br.penalty = kResonancePenalty;
  }

  const std::vector<double> band = log_grid(cfg.f_lo_hz, cfg.f_hi_hz, cfg.band_points);
  std::vector<double> signal(band.size());
  std::vector<double> noise(band.size());
  std::size_t peak_idx = 0;
  double peak = -1.0;
  for (std::size_t i = 0; i < band.size(); ++i) {
    const double f = band[i];
    noise[i] = displacement_noise(interp, params, f);
    signal[i] = displacement_signal(cfg.signal_accel, interp, params, f);
    const double g = signal[i] / cfg.signal_accel;
    if (g > peak) {
      peak = g;
      peak_idx = i;
    }
  }
  br.band_snr = band_integrated_ratio(band, signal, noise);

  // Refine the peak on the neighbouring grid cells.
  const double lo = std::log(band[peak_idx == 0 ? 0 : peak_idx - 1]);
  const double hi = std::log(band[std::min(peak_idx + 1, band.size() - 1)]);
  const double lp = golden_section_maximize(
      [&](double x) { return gain(interp, mass_kg, k_spring, std::exp(x)); }, lo, hi, 1e-12);
  br.peak_hz = std::clamp(std::exp(lp), cfg.f_lo_hz, cfg.f_hi_hz);
  br.peak_gain = gain(interp, mass_kg, k_spring, br.peak_hz);
  if (peak > br.peak_gain) {
    br.peak_gain = peak;
    br.peak_hz = band[peak_idx];
  }

  if (measure_bandwidth) {
    const double level = br.peak_gain * kHalfPower;
    const double lower = half_power_edge(interp, mass_kg, k_spring, br.peak_hz, interp.f_min(),
                                         level, br.bandwidth_truncated);
    const double upper = half_power_edge(interp, mass_kg, k_spring, br.peak_hz, interp.f_max(),
                                         level, br.bandwidth_truncated);
    br.bandwidth_hz = upper - lower;
    if (w_bw > 0.0) {
      br.bandwidth_term =
          -w_bw * std::abs(br.bandwidth_hz - cfg.target_bandwidth_hz) / cfg.target_bandwidth_hz;
    }
  }

  if (w_snr > 0.0) br.snr_term = w_snr * std::log(br.band_snr);
  if (w_sens > 0.0) br.sensitivity_term = w_sens * std::log(br.peak_gain);
  return {br.total(), br};
}

}  // namespace

ObjectiveValue objective_eval(const ObjectiveConfig& cfg, const DampingInterpolant& interp,
                              double mass_kg, double temperature_k, double k_spring) {
  return evaluate(cfg, interp, mass_kg, temperature_k, k_spring, cfg.weight_bandwidth > 0.0);
}

DesignResult optimize_spring(const ObjectiveConfig& cfg, const DampingInterpolant& interp,
                             double mass_kg, double temperature_k) {
  cfg.validate(interp.f_min(), interp.f_max());
  auto score = [&](double log_k) {
    return objective_eval(cfg, interp, mass_kg, temperature_k, std::exp(log_k)).value;
  };

  const double a = std::log(cfg.k_min);
  const double b = std::log(cfg.k_max);
  double best_log_k = a;
  bool boundary = false;

  if (b - a < 1e-9) {
    // Collapsed interval: nothing to search.
    best_log_k = score(a) >= score(b) ? a : b;
    boundary = true;
  } else {
    const std::size_t n = cfg.grid_points;
    std::vector<double> grid(n);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      grid[i] = i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
      values[i] = score(grid[i]);
    }
    const std::size_t i_best =
        static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    const double lo = grid[i_best == 0 ? 0 : i_best - 1];
    const double hi = grid[std::min(i_best + 1, n - 1)];
    const double refined = golden_section_maximize(score, lo, hi, 1e-10);
    best_log_k = score(refined) >= values[i_best] ? refined : grid[i_best];
    const double edge_tol = 1e-6 * (b - a);
    boundary = best_log_k - a <= edge_tol || b - best_log_k <= edge_tol;
  }

  DesignResult result;
  result.k_s_opt = std::clamp(std::exp(best_log_k), cfg.k_min, cfg.k_max);
  const ObjectiveValue v = evaluate(cfg, interp, mass_kg, temperature_k, result.k_s_opt, true);
  result.objective_value = v.value;
  result.breakdown = v.breakdown;
  result.resonance_hz = v.breakdown.resonance_hz;
  result.on_boundary = boundary;
  result.electrical_noise_floor = cfg.electrical_noise_floor;
  if (result.resonance_hz) {
    result.z_noise_at_resonance = displacement_noise(
        interp, ResonatorParams{mass_kg, result.k_s_opt, temperature_k}, *result.resonance_hz);
  }
  return result;
}

std::string design_to_json(const DesignResult& r, const ObjectiveConfig& cfg) {
  using json = nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["format"] = "design/1";
  j["k_s_opt_n_per_m"] = r.k_s_opt;
  j["resonance_hz"] = opt(r.resonance_hz);
  j["objective_value"] = r.objective_value;
  j["on_boundary"] = r.on_boundary;
  const ObjectiveBreakdown& b = r.breakdown;
  j["breakdown"] = {
      {"snr_term", b.snr_term},
      {"sensitivity_term", b.sensitivity_term},
      {"bandwidth_term", b.bandwidth_term},
      {"penalty", b.penalty},
      {"band_snr", b.band_snr},
      {"peak_gain", b.peak_gain},
      {"peak_hz", b.peak_hz},
      {"bandwidth_hz", b.bandwidth_hz},
      {"bandwidth_truncated", b.bandwidth_truncated},
      {"resonance_in_domain", b.resonance_in_domain},
  };
  j["z_noise_at_resonance_m_rthz"] = opt(r.z_noise_at_resonance);
  j["electrical_noise_floor_m_rthz"] = opt(r.electrical_noise_floor);
  j["config"] = {
      {"weights", {cfg.weight_snr, cfg.weight_sensitivity, cfg.weight_bandwidth}},
      {"band_hz", {cfg.f_lo_hz, cfg.f_hi_hz}},
      {"target_bandwidth_hz", cfg.target_bandwidth_hz},
      {"k_range", {cfg.k_min, cfg.k_max}},
      {"signal_accel", cfg.signal_accel},
  };
  return j.dump(2) + "\n";
}

std::string design_summary(const DesignResult& r) {
  char buf[128];
  std::string out;
  auto line = [&](const char* name, double v) {
    std::snprintf(buf, sizeof buf, "  %-26s %.6g\n", name, v);
    out += buf;
  };
  out += "design result\n";
  line("k_s_opt [N/m]", r.k_s_opt);
  if (r.resonance_hz) {
    line("resonance [Hz]", *r.resonance_hz);
  } else {
    out += "  resonance [Hz]             outside damping table\n";
  }
  line("objective", r.objective_value);
  line("  snr term", r.breakdown.snr_term);
  line("  sensitivity term", r.breakdown.sensitivity_term);
  line("  bandwidth term", r.breakdown.bandwidth_term);
  line("  penalty", r.breakdown.penalty);
  line("band SNR", r.breakdown.band_snr);
  line("peak gain [s^2]", r.breakdown.peak_gain);
  line("-3 dB bandwidth [Hz]", r.breakdown.bandwidth_hz);
  if (r.z_noise_at_resonance) line("z noise @ f_res [m/rtHz]", *r.z_noise_at_resonance);
  if (r.electrical_noise_floor) line("electrical floor [m/rtHz]", *r.electrical_noise_floor);
  out += r.on_boundary ? "  optimum on search boundary\n" : "";
  return out;
}

}  // namespace sqn
