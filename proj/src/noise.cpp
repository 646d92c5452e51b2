#include "squeezenoise/noise.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "squeezenoise/errors.hpp"

namespace sqn {

namespace {

double omega_of(double freq_hz) { return 2.0 * std::numbers::pi * freq_hz; }

}  // namespace

void ResonatorParams::validate() const {
  if (!(mass_kg > 0.0) || !std::isfinite(mass_kg)) throw ConfigError("mass must be positive");
  if (!(k_spring_n_per_m > 0.0) || !std::isfinite(k_spring_n_per_m)) {
    throw ConfigError("spring constant must be positive");
  }
  if (!(temperature_k > 0.0) || !std::isfinite(temperature_k)) {
    throw ConfigError("temperature must be positive");
  }
}

double force_noise_density(double b, double temperature_k) {
  if (!(b >= 0.0) || !(temperature_k >= 0.0)) {
    throw UnphysicalInput("damping and temperature must be non-negative");
  }
  return std::sqrt(4.0 * kBoltzmann * temperature_k * b);
}

double input_accel_noise(DampingPoint p, const ResonatorParams& params) {
  return force_noise_density(p.b, params.temperature_k) / params.mass_kg;
}

std::complex<double> mechanical_tf(DampingPoint p, const ResonatorParams& params, double omega) {
  return {params.k_spring_n_per_m + p.kd - omega * omega * params.mass_kg, omega * p.b};
}

double displacement_noise(DampingPoint p, const ResonatorParams& params, double omega) {
  const double mag = std::abs(mechanical_tf(p, params, omega));
  if (mag == 0.0) throw SingularResponse("|D(jw)| = 0 at undamped resonance");
  return force_noise_density(p.b, params.temperature_k) / mag;
}

double displacement_signal(double accel_ext, DampingPoint p, const ResonatorParams& params,
                           double omega) {
  const double mag = std::abs(mechanical_tf(p, params, omega));
  if (mag == 0.0) throw SingularResponse("|D(jw)| = 0 at undamped resonance");
  return params.mass_kg * std::abs(accel_ext) / mag;
}

double snr_input(double accel_ext, DampingPoint p, const ResonatorParams& params) {
  const double noise = force_noise_density(p.b, params.temperature_k);
  if (noise == 0.0) throw UnphysicalInput("zero noise density: SNR undefined");
  return params.mass_kg * std::abs(accel_ext) / noise;
}

double input_accel_noise(const DampingInterpolant& interp, const ResonatorParams& params,
                         double freq_hz) {
  return input_accel_noise(interp(freq_hz), params);
}

double snr_input(double accel_ext, const DampingInterpolant& interp,
                 const ResonatorParams& params, double freq_hz) {
  return snr_input(accel_ext, interp(freq_hz), params);
}

std::complex<double> mechanical_tf(const DampingInterpolant& interp,
                                   const ResonatorParams& params, double freq_hz) {
  return mechanical_tf(interp(freq_hz), params, omega_of(freq_hz));
}

double displacement_noise(const DampingInterpolant& interp, const ResonatorParams& params,
                          double freq_hz) {
  return displacement_noise(interp(freq_hz), params, omega_of(freq_hz));
}

double displacement_signal(double accel_ext, const DampingInterpolant& interp,
                           const ResonatorParams& params, double freq_hz) {
  return displacement_signal(accel_ext, interp(freq_hz), params, omega_of(freq_hz));
}

ForceRatios force_ratios(const DampingInterpolant& interp, const ResonatorParams& params,
                         double freq_hz) {
  const DampingPoint p = interp(freq_hz);
  return {omega_of(freq_hz) * p.b / params.k_spring_n_per_m, p.kd / params.k_spring_n_per_m};
}

DampingSpectrum white_baseline(const DampingSpectrum& spec, AnchorRule anchor) {
  double b0 = spec.rows().front().b_ns_per_m;
  if (anchor.freq_hz) {
    const double f = *anchor.freq_hz;
    if (!(f >= spec.f_min() && f <= spec.f_max())) {
      throw DomainError("white-noise anchor " + std::to_string(f) + " Hz outside table range");
    }
    if (spec.size() >= DampingInterpolant::kMinRows) {
      b0 = DampingInterpolant(spec)(f).b;
    } else {
      // Too short to interpolate: only exact rows can anchor.
      bool found = false;
      for (const DampingRow& r : spec.rows()) {
        if (r.freq_hz == f) {
          b0 = r.b_ns_per_m;
          found = true;
        }
      }
      if (!found) throw DomainError("anchor frequency is not a table row");
    }
  }
  std::vector<DampingRow> rows;
  rows.reserve(spec.size());
  for (const DampingRow& r : spec.rows()) rows.push_back({r.freq_hz, b0, 0.0});
  return DampingSpectrum(std::move(rows), "white-baseline");
}

NoiseSpectra compute_spectra(const DampingSpectrum& spec, const ResonatorParams& params,
                             std::span<const double> freq_hz, AnchorRule anchor,
                             std::optional<double> accel_ext) {
  params.validate();
  const DampingInterpolant interp(spec);
  const DampingSpectrum white = white_baseline(spec, anchor);
  const DampingPoint white_point{white.rows().front().b_ns_per_m, 0.0};

  NoiseSpectra out;
  out.white_b = white_point.b;
  out.rows.reserve(freq_hz.size());
  for (double f : freq_hz) {
    const DampingPoint p = interp(f);
    const double omega = omega_of(f);
    NoiseRecord rec;
    rec.freq_hz = f;
    rec.f_noise = force_noise_density(p.b, params.temperature_k);
    rec.a_noise = input_accel_noise(p, params);
    rec.z_noise = displacement_noise(p, params, omega);
    rec.f_noise_white = force_noise_density(white_point.b, params.temperature_k);
    rec.a_noise_white = input_accel_noise(white_point, params);
    rec.z_noise_white = displacement_noise(white_point, params, omega);
    if (accel_ext) {
      rec.snr = snr_input(*accel_ext, p, params);
      rec.snr_white = snr_input(*accel_ext, white_point, params);
    }
    out.rows.push_back(rec);
  }
  return out;
}

std::string export_noise_csv(const NoiseSpectra& spectra) {
  std::string out =
      "freq_hz,f_noise_n_rthz,a_noise_ms2_rthz,z_noise_m_rthz,z_noise_white_m_rthz,"
      "a_noise_white_ms2_rthz";
  const bool snr = spectra.has_snr();
  if (snr) out += ",snr";
  out += '\n';
  char buf[160];
  for (const NoiseRecord& r : spectra.rows) {
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e", r.freq_hz, r.f_noise,
                  r.a_noise, r.z_noise, r.z_noise_white, r.a_noise_white);
    out += buf;
    if (snr) {
      std::snprintf(buf, sizeof buf, ",%.16e", r.snr.value_or(0.0));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

double band_integrated_ratio(std::span<const double> freq_hz, std::span<const double> signal,
                             std::span<const double> noise) {
  if (freq_hz.size() < 2 || signal.size() != freq_hz.size() || noise.size() != freq_hz.size()) {
    throw ConfigError("band integration needs >= 2 matching samples");
  }
  double sig = 0.0;
  double noi = 0.0;
  for (std::size_t i = 1; i < freq_hz.size(); ++i) {
    if (!(freq_hz[i] > freq_hz[i - 1]) || !(freq_hz[i - 1] > 0.0)) {
      throw ConfigError("band integration grid must be positive and increasing");
    }
    const double h = std::log(freq_hz[i] / freq_hz[i - 1]);
    const double f0 = freq_hz[i - 1];
    const double f1 = freq_hz[i];
    sig += 0.5 * h * (f0 * signal[i - 1] * signal[i - 1] + f1 * signal[i] * signal[i]);
    noi += 0.5 * h * (f0 * noise[i - 1] * noise[i - 1] + f1 * noise[i] * noise[i]);
  }
  if (noi == 0.0) throw UnphysicalInput("band noise power is zero");
  return std::sqrt(sig / noi);
}

}  // namespace sqn
