#include "run_config.hpp"

#include "mwassoc/errors.hpp"
#include "mwassoc/units.hpp"

#include <charconv>
#include <sstream>

namespace mwassoc::cli {

namespace {

std::string number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string quoted(const std::string& s) {
  if (s.find('"') != std::string::npos) throw ConfigError("config values may not contain '\"': " + s);
  return "\"" + s + "\"";
}

class Emitter {
 public:
  void put(const char* key, const std::string& value) {
    if (!value.empty()) out_ << key << " = " << quoted(value) << "\n";
  }
  void put(const char* key, double value) { out_ << key << " = " << number(value) << "\n"; }
  void put(const char* key, int value) { out_ << key << " = " << value << "\n"; }
  void put(const char* key, const std::optional<double>& value) {
    if (value) put(key, *value);
  }
  void put(const char* key, const std::optional<int>& value) {
    if (value) put(key, *value);
  }
  void put(const char* key, const std::vector<std::string>& values) {
    if (values.empty()) return;
    out_ << key << " = [";
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? ", " : "") << quoted(values[i]);
    out_ << "]\n";
  }
  void put(const char* key, const std::vector<double>& values) {
    if (values.empty()) return;
    out_ << key << " = [";
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? ", " : "") << number(values[i]);
    out_ << "]\n";
  }
  void comment(const char* text) { out_ << "\n# " << text << "\n"; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

// Dipole labels must name the curves they connect.
void require_couples(const DipoleCurve& d, const std::string& a, const std::string& b, const std::string& what) {
  const auto& [x, y] = d.couples();
  if (!((x == a && y == b) || (x == b && y == a))) {
    throw ConfigError(what + " couples '" + x + "," + y + "' but should couple '" + a + "," + b + "'");
  }
}

} // namespace

void bind_options(CLI::App& app, RunConfig& c) {
  app.add_option("--model_dir", c.model_dir, "directory for relative data paths (default: config file directory)");
  app.add_option("--a_potential", c.a_potential, "a-state potential file");
  app.add_option("--x_potential", c.x_potential, "X-state potential file");
  app.add_option("--a_dipole", c.a_dipole, "a-state permanent dipole file");
  app.add_option("--x_dipole", c.x_dipole, "X-state permanent dipole file");
  app.add_option("--excited", c.excited, "excited-state potential files")->delimiter(',');
  app.add_option("--excited_to_a", c.excited_to_a, "excited-to-a transition dipoles, same order")->delimiter(',');
  app.add_option("--excited_to_x", c.excited_to_x, "excited-to-X transition dipoles, same order")->delimiter(',');

  app.add_option("--mass1_amu", c.mass1_amu, "mass of atom 1, amu");
  app.add_option("--mass2_amu", c.mass2_amu, "mass of atom 2, amu");
  app.add_option("--trap_kHz", c.trap_kHz, "trap frequency omega/2pi, kHz (0: no trap)")->capture_default_str();
  app.add_option("--intensity_Wcm2", c.intensity_Wcm2, "microwave intensity, W/cm^2")->capture_default_str();
  app.add_option("--angular_C", c.angular_C, "angular factor C (and C')")->capture_default_str();
  app.add_option("--phase_step", c.phase_step, "grid phase per interval, rad")->capture_default_str();
  app.add_option("--r_min", c.r_min, "inner grid bound, bohr");
  app.add_option("--r_max", c.r_max, "outer grid bound, bohr");

  app.add_option("--potential", c.potential, "levels: PATH, flat or morse:De_cm1,Re,a");
  app.add_option("--ell", c.ell, "levels: partial wave")->capture_default_str();
  app.add_option("--e_max_cm1", c.e_max_cm1, "levels: cutoff above the asymptote, cm^-1");
  app.add_option("--max_states", c.max_states, "levels: at most this many states")->capture_default_str();

  app.add_option("--state", c.state, "lower state, a or X")->check(CLI::IsMember({"a", "X"}))->capture_default_str();
  app.add_option("--from_top", c.from_top, "feshbach: 0 last bound level, 1 second to last")->capture_default_str();
  app.add_option("--initial_v", c.initial_v, "raman: a-state l=1 level (default: largest microwave dipole)");
  app.add_option("--detuning_MHz", c.detuning_MHz, "raman: detuning Delta, MHz")->capture_default_str();
  app.add_option("--linewidth_MHz", c.linewidth_MHz, "raman: linewidth gamma, MHz (required)");
  app.add_option("--freqs_kHz", c.freqs_kHz, "scaling: trap frequencies, kHz")->delimiter(',')->capture_default_str();
  app.add_option("--target_Eb_cm1", c.target_Eb_cm1, "scaling: binding energy of the final level")
      ->capture_default_str();
  app.add_option("--window_min_cm1", c.window_min_cm1, "scaling: smallest |E_b| of the final level")
      ->capture_default_str();
  app.add_option("--window_max_cm1", c.window_max_cm1, "scaling: largest |E_b| of the final level")
      ->capture_default_str();

  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("-o,--output", c.output, "output file (default: standard output)");
}

std::string to_config_text(const RunConfig& c) {
  Emitter e;
  e.comment("data files");
  e.put("model_dir", c.model_dir);
  e.put("a_potential", c.a_potential);
  e.put("x_potential", c.x_potential);
  e.put("a_dipole", c.a_dipole);
  e.put("x_dipole", c.x_dipole);
  e.put("excited", c.excited);
  e.put("excited_to_a", c.excited_to_a);
  e.put("excited_to_x", c.excited_to_x);
  e.comment("system");
  e.put("mass1_amu", c.mass1_amu);
  e.put("mass2_amu", c.mass2_amu);
  e.put("trap_kHz", c.trap_kHz);
  e.put("intensity_Wcm2", c.intensity_Wcm2);
  e.put("angular_C", c.angular_C);
  e.put("phase_step", c.phase_step);
  e.put("r_min", c.r_min);
  e.put("r_max", c.r_max);
  e.comment("levels");
  e.put("potential", c.potential);
  e.put("ell", c.ell);
  e.put("e_max_cm1", c.e_max_cm1);
  e.put("max_states", c.max_states);
  e.comment("scans");
  e.put("state", c.state);
  e.put("from_top", c.from_top);
  e.put("initial_v", c.initial_v);
  e.put("detuning_MHz", c.detuning_MHz);
  e.put("linewidth_MHz", c.linewidth_MHz);
  e.put("freqs_kHz", c.freqs_kHz);
  e.put("target_Eb_cm1", c.target_Eb_cm1);
  e.put("window_min_cm1", c.window_min_cm1);
  e.put("window_max_cm1", c.window_max_cm1);
  e.comment("output");
  e.put("format", c.format);
  e.put("output", c.output);
  return e.str();
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  CLI::App app;
  app.allow_config_extras(CLI::config_extras_mode::error);
  bind_options(app, cfg);
  std::istringstream in(text);
  try {
    app.parse_from_stream(in);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

void check(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(c.trap_kHz >= 0.0)) fail("trap_kHz must be >= 0");
  if (!(c.intensity_Wcm2 >= 0.0)) fail("intensity_Wcm2 must be >= 0");
  if (!(c.phase_step > 0.0 && c.phase_step <= 0.5)) fail("phase_step must lie in (0, 0.5]");
  if (c.r_min && !(*c.r_min > 0.0)) fail("r_min must be > 0");
  if (c.r_min && c.r_max && !(*c.r_max > *c.r_min)) fail("r_max must exceed r_min");
  if (c.r_min.has_value() != c.r_max.has_value()) fail("r_min and r_max must be given together");
  if (c.ell < 0) fail("ell must be >= 0");
  if (c.max_states < 1) fail("max_states must be >= 1");
  if (c.from_top != 0 && c.from_top != 1) fail("from_top must be 0 or 1");
  if (c.linewidth_MHz && !(*c.linewidth_MHz >= 0.0)) fail("linewidth_MHz must be >= 0");
  if (c.freqs_kHz.empty()) fail("freqs_kHz must not be empty");
  if (c.excited_to_a.size() != c.excited.size() || c.excited_to_x.size() != c.excited.size()) {
    fail("excited, excited_to_a and excited_to_x need the same number of entries");
  }
  if (c.state != "a" && c.state != "X") fail("state must be a or X");
  if (c.format != "csv" && c.format != "json") fail("format must be csv or json");
}

void anchor_model_dir(RunConfig& cfg, const std::filesystem::path& base) {
  const std::filesystem::path dir(cfg.model_dir);
  if (cfg.model_dir.empty()) {
    cfg.model_dir = base.empty() ? "." : base.string();
  } else if (dir.is_relative() && !base.empty()) {
    cfg.model_dir = (base / dir).lexically_normal().string();
  }
}

std::filesystem::path resolve(const RunConfig& cfg, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || cfg.model_dir.empty()) return p;
  return (std::filesystem::path(cfg.model_dir) / p).lexically_normal();
}

LowerState lower_state(const RunConfig& cfg) { return cfg.state == "X" ? LowerState::x : LowerState::a; }

SystemConfig load_system(const RunConfig& c) {
  check(c);
  SystemConfig sys;
  sys.mass1_amu = c.mass1_amu;
  sys.mass2_amu = c.mass2_amu;
  sys.trap_khz = c.trap_kHz;
  sys.intensity_wcm2 = c.intensity_Wcm2;
  sys.angular_c = c.angular_C;
  sys.phase_step = c.phase_step;
  if (c.r_min && c.r_max) sys.bounds = GridBounds{*c.r_min, *c.r_max};

  if (!c.a_potential.empty()) sys.a_state = load_tabulated_file(resolve(c, c.a_potential).string());
  if (!c.x_potential.empty()) sys.x_state = load_tabulated_file(resolve(c, c.x_potential).string());
  if (!c.a_dipole.empty()) {
    sys.a_dipole = load_dipole_file(resolve(c, c.a_dipole).string());
    if (!sys.a_state) throw ConfigError("a_dipole given without a_potential");
    require_couples(*sys.a_dipole, sys.a_state->label(), sys.a_state->label(), "a_dipole");
  }
  if (!c.x_dipole.empty()) {
    sys.x_dipole = load_dipole_file(resolve(c, c.x_dipole).string());
    if (!sys.x_state) throw ConfigError("x_dipole given without x_potential");
    require_couples(*sys.x_dipole, sys.x_state->label(), sys.x_state->label(), "x_dipole");
  }
  for (std::size_t i = 0; i < c.excited.size(); ++i) {
    ExcitedState ex;
    ex.curve = load_tabulated_file(resolve(c, c.excited[i]).string());
    ex.to_a = load_dipole_file(resolve(c, c.excited_to_a[i]).string());
    ex.to_x = load_dipole_file(resolve(c, c.excited_to_x[i]).string());
    if (!sys.a_state || !sys.x_state) throw ConfigError("excited states need both a_potential and x_potential");
    require_couples(*ex.to_a, sys.a_state->label(), ex.curve.label(), "excited_to_a entry " + std::to_string(i + 1));
    require_couples(*ex.to_x, sys.x_state->label(), ex.curve.label(), "excited_to_x entry " + std::to_string(i + 1));
    sys.excited.push_back(std::move(ex));
  }
  sys.check();
  return sys;
}

PotentialCurve levels_curve(const RunConfig& c) {
  const std::string& p = c.potential;
  if (p.empty()) {
    const std::string& path = lower_state(c) == LowerState::a ? c.a_potential : c.x_potential;
    if (path.empty()) throw ConfigError("levels needs `potential` or the selected state's potential file");
    return load_tabulated_file(resolve(c, path).string());
  }
  if (p == "flat") return make_flat(0.0);
  if (p.starts_with("morse:")) {
    double v[3] = {0, 0, 0};
    const char* s = p.data() + 6;
    const char* end = p.data() + p.size();
    for (int i = 0; i < 3; ++i) {
      const auto [ptr, ec] = std::from_chars(s, end, v[i]);
      if (ec != std::errc() || (i < 2 && (ptr == end || *ptr != ',')) || (i == 2 && ptr != end)) {
        throw ConfigError("potential: expected morse:De_cm1,Re,a, got '" + p + "'");
      }
      s = ptr + 1;
    }
    try {
      return make_morse(units::cm1_to_hartree(v[0]), v[1], v[2], 0.0);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("potential: ") + e.what());
    }
  }
  return load_tabulated_file(resolve(c, p).string());
}

} // namespace mwassoc::cli
