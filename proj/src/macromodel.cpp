#include "squeezenoise/macromodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <json.hpp>

namespace sqn {

namespace {

using cd = std::complex<double>;
constexpr cd kJ{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stage impedance r jx / (1 + jx) with x = w l / r, written so that neither
// a huge nor a tiny x overflows.
cd stage_impedance(double r, double l, double omega) {
  const double x = omega * l / r;
  if (x > 1.0) return r / cd(1.0, -1.0 / x);
  return kJ * omega * l / cd(1.0, x);
}

struct BranchFit : Eigen::DenseFunctor<double> {
  BranchFit(std::span<const double> omega, std::span<const cd> target, std::size_t branches)
      : Eigen::DenseFunctor<double>(static_cast<int>(2 * branches),
                                    static_cast<int>(2 * omega.size())),
        omega_(omega),
        target_(target),
        branches_(branches) {
    scale_.reserve(target.size());
    for (const cd& z : target) scale_.push_back(1.0 / std::abs(z));
  }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& fvec) const {
    const std::size_t n = omega_.size();
    for (std::size_t i = 0; i < n; ++i) {
      cd z = 0.0;
      for (std::size_t k = 0; k < branches_; ++k) {
        z += stage_impedance(std::exp(p[k]), std::exp(p[branches_ + k]), omega_[i]);
      }
      const cd e = (z - target_[i]) * scale_[i];
      fvec[static_cast<Eigen::Index>(i)] = e.real();
      fvec[static_cast<Eigen::Index>(n + i)] = e.imag();
    }
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& fjac) const {
    const std::size_t n = omega_.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < branches_; ++k) {
        const double r = std::exp(p[k]);
        const double x = omega_[i] * std::exp(p[branches_ + k]) / r;
        // d/dln r = -r x^2 / (1 + jx)^2 ; d/dln l = j r x / (1 + jx)^2
        // evaluated as r / (1/x - j)^2 forms to stay finite for large x.
        cd d_lnr;
        cd d_lnl;
        if (x > 1.0) {
          const cd q = cd(1.0 / x, 1.0);
          d_lnr = -r / (q * q);
          d_lnl = kJ * r / (x * q * q);
        } else {
          const cd q = cd(1.0, x);
          d_lnr = -r * x * x / (q * q);
          d_lnl = kJ * r * x / (q * q);
        }
        d_lnr *= scale_[i];
        d_lnl *= scale_[i];
        const auto row_re = static_cast<Eigen::Index>(i);
        const auto row_im = static_cast<Eigen::Index>(n + i);
        const auto col_r = static_cast<Eigen::Index>(k);
        const auto col_l = static_cast<Eigen::Index>(branches_ + k);
        fjac(row_re, col_r) = d_lnr.real();
        fjac(row_im, col_r) = d_lnr.imag();
        fjac(row_re, col_l) = d_lnl.real();
        fjac(row_im, col_l) = d_lnl.imag();
      }
    }
    return 0;
  }

 private:
  std::span<const double> omega_;
  std::span<const cd> target_;
  std::vector<double> scale_;
  std::size_t branches_;
};

bool converged(Eigen::LevenbergMarquardtSpace::Status s) {
  using namespace Eigen::LevenbergMarquardtSpace;
  switch (s) {
    case RelativeReductionTooSmall:
    case RelativeErrorTooSmall:
    case RelativeErrorAndReductionTooSmall:
    case CosinusTooSmall:
    case FtolTooSmall:
    case XtolTooSmall:
    case GtolTooSmall:
      return true;
    default:
      return false;
  }
}

double rms_relative_error(const LumpedRLModel& model, std::span<const double> omega,
                          std::span<const cd> target) {
  double acc = 0.0;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    acc += std::norm((model_impedance(model, omega[i]) - target[i]) / std::abs(target[i]));
  }
  return std::sqrt(acc / static_cast<double>(omega.size()));
}

LumpedRLModel unpack(const Eigen::VectorXd& p, std::size_t branches) {
  LumpedRLModel model;
  for (std::size_t k = 0; k < branches; ++k) {
    model.branches.push_back({std::exp(p[static_cast<Eigen::Index>(k)]),
                              std::exp(p[static_cast<Eigen::Index>(branches + k)])});
  }
  std::sort(model.branches.begin(), model.branches.end(),
            [](const RLBranch& a, const RLBranch& b) { return a.corner_omega() < b.corner_omega(); });
  return model;
}

std::string sci12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

}  // namespace

void LumpedRLModel::validate() const {
  if (branches.empty()) throw ConfigError("model has no branches");
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const RLBranch& b = branches[k];
    if (!(b.r > 0.0) || !(b.l > 0.0) || !std::isfinite(b.r) || !std::isfinite(b.l)) {
      throw ConfigError("branch " + std::to_string(k + 1) + ": r and l must be finite and positive");
    }
    if (k > 0 && !(b.corner_omega() > branches[k - 1].corner_omega())) {
      throw ConfigError("branch corner frequencies must be strictly increasing");
    }
  }
}

AirAdmittancePoint air_admittance(DampingPoint p, double omega) {
  if (!(omega > 0.0)) throw ConfigError("admittance needs omega > 0");
  return {omega, p.b, -p.kd / omega};
}

AirAdmittancePoint air_admittance(const DampingInterpolant& interp, double freq_hz) {
  return air_admittance(interp(freq_hz), kTwoPi * freq_hz);
}

SeriesRLPoint series_rl(const AirAdmittancePoint& y) {
  const double b = y.y_real;
  const double kd = -y.y_imag * y.omega;
  const double w2 = y.omega * y.omega;
  const double den = b * b * w2 + kd * kd;
  if (den == 0.0) throw DegenerateAdmittance("b = k_d = 0: admittance has no inverse");
  return {y.omega, w2 * b / den, kd / den};
}

DampingPoint damping_from_series(const SeriesRLPoint& z) {
  const cd y = 1.0 / z.impedance();
  return {y.real(), -y.imag() * z.omega};
}

std::complex<double> branch_impedance(const RLBranch& branch, double omega) {
  return stage_impedance(branch.r, branch.l, omega);
}

std::complex<double> model_impedance(const LumpedRLModel& model, double omega) {
  cd z = 0.0;
  for (const RLBranch& b : model.branches) z += stage_impedance(b.r, b.l, omega);
  return z;
}

std::vector<SeriesRLPoint> series_rl_samples(const DampingInterpolant& interp,
                                             std::span<const double> freq_hz) {
  std::vector<SeriesRLPoint> out;
  out.reserve(freq_hz.size());
  for (double f : freq_hz) out.push_back(series_rl(air_admittance(interp, f)));
  return out;
}

LumpedRLModel fit_branches(std::span<const SeriesRLPoint> points, const FitOptions& options) {
  const std::size_t nb = options.n_branches;
  if (nb == 0) throw ConfigError("need at least one branch");
  if (points.size() < 2 * nb) {
    throw ConfigError("fit needs at least " + std::to_string(2 * nb) + " points");
  }
  std::vector<double> omega;
  std::vector<cd> target;
  for (const SeriesRLPoint& p : points) {
    if (!(p.omega > 0.0) || (p.r_air == 0.0 && p.l_air == 0.0)) {
      throw ConfigError("fit points need omega > 0 and non-zero impedance");
    }
    if (!omega.empty() && !(p.omega > omega.back())) {
      throw ConfigError("fit points must be ordered by increasing frequency");
    }
    omega.push_back(p.omega);
    target.push_back(p.impedance());
  }
  const double lo = std::log(omega.front());
  const double hi = std::log(omega.back());
  if (hi - lo < std::log(10.0) * (1.0 - 1e-12)) {
    throw ConfigError("fit points must span at least one decade");
  }

  // Seeds: corners log-uniform over the band, resistances sharing the
  // high-frequency impedance magnitude. Start 0 is unjittered.
  const double r_total = std::abs(target.back());
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  std::normal_distribution<double> r_jitter(0.0, 0.5);
  const double slot = (hi - lo) / static_cast<double>(nb);

  BranchFit functor(omega, target, nb);
  LumpedRLModel best;
  best.fit_residual = std::numeric_limits<double>::infinity();
  bool any_converged = false;

  const std::size_t starts = std::max<std::size_t>(options.starts, 1);
  for (std::size_t s = 0; s < starts; ++s) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(2 * nb));
    for (std::size_t k = 0; k < nb; ++k) {
      double log_corner = lo + (static_cast<double>(k) + 0.5) * slot;
      double log_r = std::log(r_total / static_cast<double>(nb));
      if (s > 0) {
        log_corner += jitter(rng) * slot;
        log_r += r_jitter(rng);
      }
      p[static_cast<Eigen::Index>(k)] = log_r;
      p[static_cast<Eigen::Index>(nb + k)] = log_r - log_corner;
    }
    Eigen::LevenbergMarquardt<BranchFit> lm(functor);
    lm.setXtol(1e-15);
    lm.setFtol(1e-15);
    lm.setGtol(0.0);
    lm.setMaxfev(options.max_evaluations);
    const auto status = lm.minimize(p);
    if (!p.allFinite()) continue;

    LumpedRLModel candidate = unpack(p, nb);
    candidate.fit_residual = rms_relative_error(candidate, omega, target);
    if (!std::isfinite(candidate.fit_residual)) continue;
    const bool ok = converged(status);
    any_converged = any_converged || ok;
    if (candidate.fit_residual < best.fit_residual) best = std::move(candidate);
  }

  best.f_lo_hz = omega.front() / kTwoPi;
  best.f_hi_hz = omega.back() / kTwoPi;
  if (best.branches.empty()) {
    throw FitError("no start produced a finite fit", best);
  }
  if (!any_converged) {
    throw FitError("fit did not converge after " + std::to_string(starts) +
                       " starts; best residual " + std::to_string(best.fit_residual),
                   best);
  }
  if (best.fit_residual > options.max_residual) {
    throw FitError("fit residual " + std::to_string(best.fit_residual) + " exceeds limit " +
                       std::to_string(options.max_residual),
                   best);
  }
  return best;
}

double model_noise_psd(const LumpedRLModel& model, double temperature_k, double omega) {
  const cd y = 1.0 / model_impedance(model, omega);
  return 4.0 * kBoltzmann * temperature_k * y.real();
}

std::vector<double> resistor_noise_psd(const LumpedRLModel& model, double temperature_k,
                                       double omega) {
  // Resistor k's Norton current 4kT/r_k becomes an open-circuit voltage
  // i_k Z_k across its stage; the port short-circuit current is V / Z.
  const double z2 = std::norm(model_impedance(model, omega));
  std::vector<double> out;
  out.reserve(model.branches.size());
  for (const RLBranch& b : model.branches) {
    const double zk2 = std::norm(stage_impedance(b.r, b.l, omega));
    out.push_back(4.0 * kBoltzmann * temperature_k / b.r * zk2 / z2);
  }
  return out;
}

std::string export_spice(const LumpedRLModel& model, const ResonatorParams& params) {
  model.validate();
  params.validate();
  const std::size_t n = model.branches.size();
  std::string out;
  out += "* squeeze-film resonator macromodel (mobility analogy: I = force, V = velocity)\n";
  out += "* fit band: " + sci12(model.f_lo_hz) + " Hz .. " + sci12(model.f_hi_hz) + " Hz\n";
  out += "* fit residual (relative RMS): " + sci12(model.fit_residual) + "\n";
  out += "* mass_kg: " + sci12(params.mass_kg) + "\n";
  out += "* k_spring_n_per_m: " + sci12(params.k_spring_n_per_m) + "\n";
  out += "* temperature_k: " + sci12(params.temperature_k) + "\n";
  out += "* branches: " + std::to_string(n) + "\n";
  out += "* noise: R1..R" + std::to_string(n) +
         " are the only noise sources, current PSD 4*k_B*T/R [N^2/Hz]\n";
  for (std::size_t k = 0; k < n; ++k) {
    out += "*   R" + std::to_string(k + 1) + ": " +
           sci12(4.0 * kBoltzmann * params.temperature_k / model.branches[k].r) + "\n";
  }
  out += ".SUBCKT SQFILM n1\n";
  out += "C1 n1 0 " + sci12(params.mass_kg) + "\n";
  out += "L" + std::to_string(n + 1) + " n1 0 " + sci12(1.0 / params.k_spring_n_per_m) + "\n";
  for (std::size_t k = 0; k < n; ++k) {
    const std::string a = "n" + std::to_string(k + 1);
    const std::string b = k + 1 == n ? "0" : "n" + std::to_string(k + 2);
    out += "R" + std::to_string(k + 1) + " " + a + " " + b + " " + sci12(model.branches[k].r) + "\n";
    out += "L" + std::to_string(k + 1) + " " + a + " " + b + " " + sci12(model.branches[k].l) + "\n";
  }
  out += ".ENDS SQFILM\n";
  return out;
}

std::string model_to_json(const LumpedRLModel& model) {
  nlohmann::ordered_json j;
  j["format"] = "rlmodel/1";
  j["branches"] = nlohmann::ordered_json::array();
  for (const RLBranch& b : model.branches) j["branches"].push_back({{"r", b.r}, {"l", b.l}});
  j["fit_band_hz"] = {model.f_lo_hz, model.f_hi_hz};
  j["residual"] = model.fit_residual;
  j["units"] = {{"r", "(m/s)/N"}, {"l", "(m/s)*s/N"}, {"fit_band_hz", "Hz"},
                {"analogy", "mobility: current=force, voltage=velocity"}};
  return j.dump(2) + "\n";
}

LumpedRLModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "rlmodel/1") {
      throw SchemaError("unsupported model format '" + j.at("format").get<std::string>() + "'");
    }
    LumpedRLModel model;
    for (const auto& b : j.at("branches")) {
      model.branches.push_back({b.at("r").get<double>(), b.at("l").get<double>()});
    }
    const auto& band = j.at("fit_band_hz");
    if (!band.is_array() || band.size() != 2) throw SchemaError("fit_band_hz must be [lo, hi]");
    model.f_lo_hz = band[0].get<double>();
    model.f_hi_hz = band[1].get<double>();
    model.fit_residual = j.at("residual").get<double>();
    if (!j.at("units").is_object()) throw SchemaError("units must be an object");
    model.validate();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("model file: ") + e.what());
  } catch (const ConfigError& e) {
    throw SchemaError(std::string("model file: ") + e.what());
  }
}

}  // namespace sqn
