#include "squeezenoise/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "squeezenoise/config.hpp"
#include "squeezenoise/damping_data.hpp"
#include "squeezenoise/errors.hpp"
#include "squeezenoise/macromodel.hpp"
#include "squeezenoise/noise.hpp"
#include "squeezenoise/optimizer.hpp"
#include "squeezenoise/squeeze_film.hpp"

namespace sqn::cli {

namespace {

struct Options {
  std::string in;
  std::string out;
  std::string geometry;
  std::string objective;
  std::string plot_script;
  std::string white_anchor = "lowest";
  std::optional<double> mass;
  std::optional<double> kspring;
  double temp = 300.0;
  std::optional<double> fmin;
  std::optional<double> fmax;
  std::optional<std::size_t> points;
  std::optional<double> accel;
  std::size_t branches = 3;
  std::size_t starts = 8;
  double max_residual = std::numeric_limits<double>::infinity();
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
  if (!f) throw ConfigError("write failed for '" + path + "'");
}

double required(const std::optional<double>& v, const char* flag) {
  if (!v) throw ConfigError(std::string("missing required option ") + flag);
  return *v;
}

ResonatorParams resonator(const Options& o) {
  ResonatorParams p{required(o.mass, "--mass"), required(o.kspring, "--kspring"), o.temp};
  p.validate();
  return p;
}

AnchorRule parse_anchor(const std::string& text) {
  if (text == "lowest") return AnchorRule::lowest();
  try {
    std::size_t used = 0;
    const double f = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return AnchorRule::at(f);
  } catch (const std::logic_error&) {
    throw ConfigError("--white-anchor must be 'lowest' or a frequency in Hz");
  }
}

// Frequencies at which a table-driven command evaluates: a fresh log grid
// when --points is given, otherwise the table's own rows inside the band.
std::vector<double> analysis_grid(const DampingSpectrum& spec, const Options& o) {
  const double lo = o.fmin.value_or(spec.f_min());
  const double hi = o.fmax.value_or(spec.f_max());
  if (!(lo < hi)) throw ConfigError("invalid frequency grid");
  if (lo < spec.f_min() || hi > spec.f_max()) {
    throw DomainError("requested band [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] Hz exceeds damping table [" + std::to_string(spec.f_min()) + ", " +
                      std::to_string(spec.f_max()) + "] Hz");
  }
  if (o.points) return log_grid(lo, hi, *o.points);
  std::vector<double> grid;
  for (const DampingRow& r : spec.rows()) {
    if (r.freq_hz >= lo && r.freq_hz <= hi) grid.push_back(r.freq_hz);
  }
  return grid;
}

std::string gnuplot_script(const std::string& csv) {
  std::string s;
  s += "# gnuplot script: gas-loaded vs white-baseline noise spectra\n";
  s += "set datafile separator ','\n";
  s += "set logscale xy\n";
  s += "set grid\n";
  s += "set xlabel 'frequency [Hz]'\n";
  s += "set multiplot layout 2,1\n";
  s += "set ylabel 'input acceleration noise [m/s^2/sqrt(Hz)]'\n";
  s += "plot '" + csv + "' skip 1 using 1:3 with lines title 'b(f)', \\\n";
  s += "     '" + csv + "' skip 1 using 1:6 with lines dashtype 2 title 'white baseline'\n";
  s += "set ylabel 'displacement noise [m/sqrt(Hz)]'\n";
  s += "plot '" + csv + "' skip 1 using 1:4 with lines title 'b(f), k_d(f)', \\\n";
  s += "     '" + csv + "' skip 1 using 1:5 with lines dashtype 2 title 'white baseline'\n";
  s += "unset multiplot\n";
  return s;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream& err) {
  const GeometryConfig g = load_geometry_toml(o.geometry);
  const std::vector<double> grid =
      log_grid(required(o.fmin, "--fmin"), required(o.fmax, "--fmax"), o.points.value_or(50));
  const DampingSpectrum spec = synth_spectrum(g.plate, g.gas, grid, g.truncation);
  emit(export_csv(spec), o.out, out);
  err << "synth: " << spec.size() << " rows, " << spec.f_min() << " .. " << spec.f_max()
      << " Hz\n";
  return kExitOk;
}

int cmd_noise(const Options& o, std::ostream& out, std::ostream& err) {
  const DampingSpectrum spec = parse_csv_file(o.in);
  const ResonatorParams params = resonator(o);
  const std::vector<double> grid = analysis_grid(spec, o);
  const NoiseSpectra spectra = compute_spectra(spec, params, grid, parse_anchor(o.white_anchor), o.accel);
  emit(export_noise_csv(spectra), o.out, out);
  if (!o.plot_script.empty()) {
    if (o.out.empty()) throw ConfigError("--plot-script needs --out for the CSV it plots");
    emit(gnuplot_script(o.out), o.plot_script, out);
  }
  err << "noise: " << spectra.rows.size() << " frequencies, white baseline b = " << spectra.white_b
      << " N s/m\n";
  return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const DampingSpectrum spec = parse_csv_file(o.in);
  const DampingInterpolant interp(spec);
  const std::vector<double> grid = analysis_grid(spec, o);
  const std::vector<SeriesRLPoint> pts = series_rl_samples(interp, grid);
  FitOptions fo;
  fo.n_branches = o.branches;
  fo.starts = o.starts;
  fo.max_residual = o.max_residual;
  try {
    const LumpedRLModel model = fit_branches(pts, fo);
    emit(model_to_json(model), o.out, out);
    err << "fit: " << model.branches.size() << " branches, residual " << model.fit_residual
        << "\n";
    for (std::size_t k = 0; k < model.branches.size(); ++k) {
      err << "  R" << k + 1 << " = " << model.branches[k].r << "  L" << k + 1 << " = "
          << model.branches[k].l << "\n";
    }
  } catch (const FitError& e) {
    err << "fit failed: " << e.what() << "\n";
    err << "  best residual " << e.best().fit_residual << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_export_spice(const Options& o, std::ostream& out, std::ostream& err) {
  const LumpedRLModel model = model_from_json(read_text(o.in));
  const std::string net = export_spice(model, resonator(o));
  emit(net, o.out, out);
  err << "export-spice: " << model.branches.size() << " air branches\n";
  return kExitOk;
}

int cmd_optimize(const Options& o, std::ostream& out, std::ostream& err) {
  const DampingSpectrum spec = parse_csv_file(o.in);
  const DampingInterpolant interp(spec);
  const ObjectiveConfig cfg = load_objective_toml(o.objective);
  const DesignResult result = optimize_spring(cfg, interp, required(o.mass, "--mass"), o.temp);
  emit(design_to_json(result, cfg), o.out, out);
  err << design_summary(result);
  if (result.on_boundary) {
    err << "warning: optimum lies on the k_s search boundary; widen [k_min, k_max]\n";
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Squeeze-film damping, mechano-thermal noise and macromodel tool", "squeezenoise"};
  app.require_subcommand(1);
  Options o;

  auto add_in = [&](CLI::App* sub, const char* what) {
    sub->add_option("--in", o.in, what)->required();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output file (default: standard output)");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--fmin", o.fmin, "Lowest frequency [Hz]");
    sub->add_option("--fmax", o.fmax, "Highest frequency [Hz]");
    sub->add_option("--points", o.points, "Number of log-spaced frequencies");
  };
  auto add_resonator = [&](CLI::App* sub, bool with_spring) {
    sub->add_option("--mass", o.mass, "Proof mass [kg]")->required();
    if (with_spring) sub->add_option("--kspring", o.kspring, "Mechanical spring [N/m]")->required();
    sub->add_option("--temp", o.temp, "Temperature [K]")->capture_default_str();
  };

  CLI::App* synth = app.add_subcommand("synth", "Analytical damping table (CSV)");
  synth->add_option("--geometry", o.geometry, "Plate and gas TOML file")->required();
  add_grid(synth);
  add_out(synth);

  CLI::App* noise = app.add_subcommand("noise", "Noise spectra with white-noise baseline (CSV)");
  add_in(noise, "Damping table CSV");
  add_resonator(noise, true);
  add_grid(noise);
  noise->add_option("--white-anchor", o.white_anchor,
                    "'lowest' or frequency [Hz] where the white model reads b")
      ->capture_default_str();
  noise->add_option("--accel", o.accel, "Flat input acceleration [m/s^2/sqrt(Hz)] for SNR");
  noise->add_option("--plot-script", o.plot_script, "Write a gnuplot script for the CSV");
  add_out(noise);

  CLI::App* fit = app.add_subcommand("fit", "Fit parallel-RL stages to the film impedance (JSON)");
  add_in(fit, "Damping table CSV");
  fit->add_option("--branches", o.branches, "Number of RL stages")->capture_default_str();
  fit->add_option("--starts", o.starts, "Multi-start count")->capture_default_str();
  fit->add_option("--max-residual", o.max_residual, "Fail above this relative RMS residual");
  add_grid(fit);
  add_out(fit);

  CLI::App* spice = app.add_subcommand("export-spice", "SPICE subcircuit from a fitted model");
  add_in(spice, "Model JSON");
  add_resonator(spice, true);
  add_out(spice);

  CLI::App* opt = app.add_subcommand("optimize", "Choose the mechanical spring constant (JSON)");
  add_in(opt, "Damping table CSV");
  opt->add_option("--objective", o.objective, "Objective TOML file")->required();
  add_resonator(opt, false);
  add_out(opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  const std::function<int(const Options&, std::ostream&, std::ostream&)> handler =
      synth->parsed()  ? cmd_synth
      : noise->parsed() ? cmd_noise
      : fit->parsed()   ? cmd_fit
      : spice->parsed() ? cmd_export_spice
                        : cmd_optimize;
  try {
    return handler(o, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NoResonanceInBand& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const FitError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const SingularResponse& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace sqn::cli
