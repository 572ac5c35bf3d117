#include "commands.hpp"

#include "mwassoc/errors.hpp"
#include "mwassoc/units.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace mwassoc::cli {

namespace {

using units::hartree_to_cm1;

RadialGrid levels_grid(const RunConfig& cfg, const ChannelSpec& ch) {
  const std::span<const ChannelSpec> chans(&ch, 1);
  const GridBounds b = cfg.r_min && cfg.r_max ? GridBounds{*cfg.r_min, *cfg.r_max} : default_bounds(chans);
  return build_grid(chans, b.r_min, b.r_max, suggest_node_count(chans, b.r_min, b.r_max, cfg.phase_step));
}

Table transition_table(const char* command, const ScanResult& r, const RunConfig& cfg) {
  Table t;
  t.command = command;
  t.columns = {"state", "v", "l", "E_b_cm1", "d_au", "d_MHz_per_sqrtWcm2", "rabi_MHz", "two_level_ok"};
  for (const auto& rec : r.records) {
    t.rows.push_back({rec.final_level.label, static_cast<long long>(rec.final_level.v),
                      static_cast<long long>(rec.final_level.ell), rec.final_binding_cm1, rec.d_au, rec.d_rabi,
                      rec.rabi_mhz, rec.two_level_ok});
  }
  t.summary = {{"initial_state", r.initial.label},
               {"initial_v", static_cast<long long>(r.initial.v)},
               {"initial_l", static_cast<long long>(r.initial.ell)},
               {"initial_E_b_cm1", r.initial_binding_cm1},
               {"trap_kHz", cfg.trap_kHz},
               {"intensity_Wcm2", cfg.intensity_Wcm2}};
  return t;
}

void require_masses(const RunConfig& cfg) {
  if (!(cfg.mass1_amu > 0.0) || !(cfg.mass2_amu > 0.0)) throw ConfigError("mass1_amu and mass2_amu must be > 0");
}

// C1 check at one stitch point: values and analytic slopes agree across b,
// and the slope matches central finite differences on either side.
std::string stitch_defect(const PotentialCurve& v, double b) {
  const double eps = 1e-9 * b;
  const double h = 1e-5 * b;
  const double scale = std::max({std::abs(v.derivative(b)), std::abs((v(b + h) - v(b - h)) / (2 * h)), 1e-12});
  std::ostringstream why;
  if (std::abs(v(b + eps) - v(b - eps)) > 1e-6 * scale * b + 1e-14) {
    why << "value jump at R = " << b;
  } else if (std::abs(v.derivative(b + eps) - v.derivative(b - eps)) > 1e-6 * scale) {
    why << "slope jump at R = " << b;
  } else {
    for (double side : {-1.0, 1.0}) {
      const double x = b + side * 10 * h;
      const double fd = (v(x + h) - v(x - h)) / (2 * h);
      if (std::abs(fd - v.derivative(x)) > 1e-3 * scale) {
        why << "slope disagrees with finite differences near R = " << b;
        break;
      }
    }
  }
  return why.str();
}

} // namespace

Table cmd_levels(const RunConfig& cfg) {
  check(cfg);
  require_masses(cfg);
  const PotentialCurve curve = levels_curve(cfg);
  SystemConfig sys;
  sys.mass1_amu = cfg.mass1_amu;
  sys.mass2_amu = cfg.mass2_amu;
  const ChannelSpec ch{sys.reduced_mass(), cfg.ell, cfg.trap_kHz > 0 ? units::khz_to_angular_au(cfg.trap_kHz) : 0.0,
                       curve};
  const RadialGrid grid = levels_grid(cfg, ch);
  const double cutoff = cfg.e_max_cm1 ? units::cm1_to_hartree(*cfg.e_max_cm1) : 20.0 * ch.trap_omega;
  const auto states =
      solve_bound_states(ch, grid, curve.asymptote() + cutoff, static_cast<std::size_t>(cfg.max_states));

  Table t;
  t.command = "levels";
  t.columns = {"label", "v", "l", "E_cm1", "E_b_cm1", "mean_R_bohr", "classification"};
  for (const auto& s : states) {
    t.rows.push_back({s.label, static_cast<long long>(s.v), static_cast<long long>(s.ell), hartree_to_cm1(s.energy),
                      hartree_to_cm1(s.binding_energy), s.mean_r, std::string(to_string(s.classification))});
  }
  t.summary = {{"nodes", static_cast<long long>(grid.size())},
               {"r_min_bohr", grid.mapping.r_min},
               {"r_max_bohr", grid.mapping.r_max}};
  return t;
}

Table cmd_scan_microwave(const RunConfig& cfg) {
  const SystemConfig sys = load_system(cfg);
  return transition_table("scan-microwave", scan_microwave(sys, lower_state(cfg)), cfg);
}

Table cmd_scan_feshbach(const RunConfig& cfg) {
  const SystemConfig sys = load_system(cfg);
  return transition_table("scan-feshbach", scan_feshbach(sys, cfg.from_top), cfg);
}

Table cmd_scan_raman(const RunConfig& cfg) {
  if (!cfg.linewidth_MHz) throw ConfigError("scan-raman needs linewidth_MHz");
  const SystemConfig sys = load_system(cfg);
  RamanOptions opt;
  opt.initial_v = cfg.initial_v;
  opt.detuning_mhz = cfg.detuning_MHz;
  opt.linewidth_mhz = *cfg.linewidth_MHz;
  const RamanResult r = scan_raman(sys, opt);

  Table t;
  t.command = "scan-raman";
  t.columns = {"intermediate", "v", "E_b_cm1", "d1_au", "d2_au", "product_au", "deff_mag", "deff_phase"};
  for (const auto& rec : r.records) {
    t.rows.push_back({rec.intermediate.label, static_cast<long long>(rec.intermediate.v),
                      rec.intermediate_binding_cm1, rec.d1_au, rec.d2_au, rec.product_au, std::abs(rec.d_eff),
                      std::arg(rec.d_eff)});
  }
  t.summary = {{"initial_state", r.initial.label},
               {"initial_v", static_cast<long long>(r.initial.v)},
               {"final_state", r.final_level.label},
               {"final_v", static_cast<long long>(r.final_level.v)},
               {"detuning_MHz", cfg.detuning_MHz},
               {"linewidth_MHz", *cfg.linewidth_MHz}};
  return t;
}

Table cmd_scaling(const RunConfig& cfg) {
  const SystemConfig sys = load_system(cfg);
  ScalingOptions opt;
  opt.state = lower_state(cfg);
  opt.target_binding_cm1 = cfg.target_Eb_cm1;
  opt.min_binding_cm1 = cfg.window_min_cm1;
  opt.max_binding_cm1 = cfg.window_max_cm1;
  const ScalingResult r = scaling_study(sys, cfg.freqs_kHz, opt);

  Table t;
  t.command = "scaling";
  t.columns = {"omega_kHz", "d_au"};
  for (const auto& p : r.points) t.rows.push_back({p.trap_khz, p.d_au});
  t.summary = {{"fitted_exponent", r.exponent},
               {"final_state", r.final_level.label},
               {"final_v", static_cast<long long>(r.final_level.v)},
               {"final_E_b_cm1", r.final_binding_cm1}};
  return t;
}

std::vector<CheckResult> cmd_validate(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  auto attempt = [&](const std::string& name, const std::function<std::string()>& body) {
    CheckResult c{name, true, {}};
    try {
      c.detail = body();
      c.ok = c.detail.empty();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = e.what();
    }
    out.push_back(c);
    return c.ok;
  };

  attempt("config", [&] {
    check(cfg);
    require_masses(cfg);
    return std::string();
  });

  std::vector<std::pair<std::string, std::string>> pots, dips;
  if (!cfg.a_potential.empty()) pots.emplace_back("a_potential", cfg.a_potential);
  if (!cfg.x_potential.empty()) pots.emplace_back("x_potential", cfg.x_potential);
  for (const auto& p : cfg.excited) pots.emplace_back("excited", p);
  if (!cfg.a_dipole.empty()) dips.emplace_back("a_dipole", cfg.a_dipole);
  if (!cfg.x_dipole.empty()) dips.emplace_back("x_dipole", cfg.x_dipole);
  for (const auto& p : cfg.excited_to_a) dips.emplace_back("excited_to_a", p);
  for (const auto& p : cfg.excited_to_x) dips.emplace_back("excited_to_x", p);

  for (const auto& [key, path] : pots) {
    PotentialCurve curve;
    const bool loaded = attempt("file format: " + key + " " + path, [&] {
      curve = load_tabulated_file(resolve(cfg, path).string());
      return std::string();
    });
    if (!loaded) continue;
    attempt("C1 stitching: " + curve.label(), [&] {
      const auto& p = curve.points();
      for (double b : {p[0].r, p[1].r, p[p.size() - 3].r, p.back().r}) {
        if (auto why = stitch_defect(curve, b); !why.empty()) return why;
      }
      return std::string();
    });
  }
  for (const auto& [key, path] : dips) {
    std::optional<DipoleCurve> loaded_dipole;
    const bool loaded = attempt("file format: " + key + " " + path, [&] {
      loaded_dipole = load_dipole_file(resolve(cfg, path).string());
      return std::string();
    });
    if (!loaded) continue;
    const DipoleCurve& d = *loaded_dipole;
    attempt("dipole continuity: " + path, [&] {
      for (double b : {d.points().front().r, d.points().back().r}) {
        const double eps = 1e-9 * b;
        if (std::abs(d(b + eps) - d(b - eps)) > 1e-6 * std::abs(d(b)) + 1e-14) {
          return "value jump at R = " + format_number(b);
        }
      }
      return std::string();
    });
  }

  const bool all_loaded = std::all_of(out.begin(), out.end(), [](const CheckResult& c) { return c.ok; });
  if (!all_loaded) return out;

  SystemConfig sys;
  if (!attempt("labels", [&] {
        sys = load_system(cfg);
        return std::string();
      })) {
    return out;
  }

  attempt("grid adequacy", [&] {
    if (!(cfg.trap_kHz > 0.0)) return std::string();
    std::vector<ChannelSpec> chans;
    for (const auto* curve : {&sys.a_state, &sys.x_state}) {
      if (*curve) chans.push_back({sys.reduced_mass(), 0, units::khz_to_angular_au(cfg.trap_kHz), **curve});
    }
    if (chans.empty()) return std::string();
    const GridBounds b = cfg.r_max ? GridBounds{*cfg.r_min, *cfg.r_max} : default_bounds(chans);
    const double need = 6.0 * chans.front().trap_length();
    if (b.r_max < need) {
      return "r_max = " + format_number(b.r_max) + " bohr is below six trap lengths (" + format_number(need) +
             " bohr)";
    }
    return std::string();
  });
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Microwave association of ultracold polar molecules: bound states, dipoles and scans"};
  app.name("mwassoc");
  RunConfig cfg;
  bind_options(app, cfg);
  app.set_config("--config", "", "config file (key = value)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  std::string command;
  for (const char* name : {"levels", "scan-microwave", "scan-feshbach", "scan-raman", "scaling", "validate"}) {
    static const std::map<std::string, std::string> help{
        {"levels", "bound states of one channel"},
        {"scan-microwave", "trap level to molecular l=1 levels"},
        {"scan-feshbach", "last bound l=0 level to deeper l=1 levels"},
        {"scan-raman", "two-photon pathways through excited states"},
        {"scaling", "trap-frequency dependence of one dipole"},
        {"validate", "check data files, stitching and grid adequacy"}};
    app.add_subcommand(name, help.at(name))->fallthrough()->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  std::filesystem::path base;
  if (const auto* opt = app.get_config_ptr(); opt && opt->count() > 0) {
    base = std::filesystem::path(opt->as<std::string>()).parent_path();
  }
  anchor_model_dir(cfg, base);

  try {
    if (command == "validate") {
      const auto results = cmd_validate(cfg);
      const CheckResult* first = nullptr;
      for (const auto& r : results) {
        out << (r.ok ? "PASS " : "FAIL ") << r.name << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
        if (!r.ok && !first) first = &r;
      }
      if (first) {
        err << "mwassoc: validation failed: " << first->name << ": " << first->detail << "\n";
        return exit_config;
      }
      return exit_ok;
    }

    Table t;
    if (command == "levels") t = cmd_levels(cfg);
    else if (command == "scan-microwave") t = cmd_scan_microwave(cfg);
    else if (command == "scan-feshbach") t = cmd_scan_feshbach(cfg);
    else if (command == "scan-raman") t = cmd_scan_raman(cfg);
    else t = cmd_scaling(cfg);

    const std::string text = cfg.format == "json" ? to_json(t) : to_csv(t);
    if (cfg.output.empty()) {
      out << text;
    } else {
      write_atomic(cfg.output, text);
    }
    return exit_ok;
  } catch (const NumericalError& e) {
    err << "mwassoc: numerical error: " << e.what() << "\n";
    return exit_numerical;
  } catch (const ParseError& e) {
    err << "mwassoc: parse error: " << e.what() << "\n";
    return exit_config;
  } catch (const ConfigError& e) {
    err << "mwassoc: config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    err << "mwassoc: invalid argument: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    err << "mwassoc: error: " << e.what() << "\n";
    return exit_numerical;
  }
}

} // namespace mwassoc::cli
