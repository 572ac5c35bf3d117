// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include "commands.hpp"
#include "run_config.hpp"

#include "mwassoc/gridsolve.hpp"
#include "mwassoc/scans.hpp"
#include "mwassoc/transitions.hpp"
#include "mwassoc/units.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace mwassoc;
namespace fs = std::filesystem;

namespace {

const fs::path models = fs::path(MWASSOC_SOURCE_DIR) / "models";
const std::vector<std::string> bundled{"krb_like", "rbcs_like"};
constexpr std::size_t all = std::numeric_limits<std::size_t>::max();

const double mu_krb = units::amu_to_electron_masses(39.963998166 * 86.909180531 / (39.963998166 + 86.909180531));

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

SystemConfig load_model(const std::string& name) {
  const fs::path cfg = models / name / "system.cfg";
  cli::RunConfig rc = cli::parse_config_text(slurp(cfg));
  cli::anchor_model_dir(rc, cfg.parent_path());
  cli::check(rc);
  return cli::load_system(rc);
}

struct Outcome {
  bool ok = false;
  std::string detail;
};

bool run_cli(std::vector<std::string> args, std::string& out) {
  args.insert(args.begin(), "mwassoc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  return code == 0;
}

// 1. Isotropic oscillator levels.
Outcome oscillator() {
  const auto t0 = std::chrono::steady_clock::now();
  const double w = units::khz_to_angular_au(200.0);
  double worst = 0.0;
  for (int ell : {0, 1}) {
    const ChannelSpec c{mu_krb, ell, w, make_flat(0.0)};
    const RadialGrid g = default_grid(std::span<const ChannelSpec>(&c, 1), 1e-3);
    const auto s = solve_bound_states(c, g, 14.0 * w, 6);
    if (s.size() != 6) return {false, "found " + std::to_string(s.size()) + " levels for l=" + std::to_string(ell)};
    for (int n = 0; n < 6; ++n) worst = std::max(worst, rel(s[n].energy, (2 * n + ell + 1.5) * w));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < 1e-6 && secs < 10.0, "max rel err " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

// 2. Morse spectrum, nodes, orthonormality.
Outcome morse() {
  const double De = units::cm1_to_hartree(250.0), a = 0.3;
  const ChannelSpec c{mu_krb, 0, 0.0, make_morse(De, 11.0, a, 0.0)};
  const RadialGrid g = default_grid(std::span<const ChannelSpec>(&c, 1), 1e-3);
  const auto s = solve_bound_states(c, g, 0.0, all);
  const int vmax = static_cast<int>(std::floor(std::sqrt(2.0 * mu_krb * De) / a - 0.5));
  const double w0 = a * std::sqrt(2.0 * De / mu_krb);
  double e_err = 0.0, ortho = 0.0;
  bool nodes = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    nodes = nodes && count_nodes(s[i]) == s[i].v;
    const double x = s[i].v + 0.5;
    if (s[i].v <= 0.8 * vmax) e_err = std::max(e_err, rel(s[i].energy, -De + w0 * x - w0 * w0 * x * x / (4 * De)));
    for (std::size_t j = i; j < s.size(); ++j) {
      ortho = std::max(ortho, std::abs(overlap(s[i].psi, s[j].psi, g) - (i == j ? 1.0 : 0.0)));
    }
  }
  const bool enough = static_cast<int>(s.size()) > static_cast<int>(0.8 * vmax);
  return {enough && nodes && e_err < 1e-6 && ortho < 1e-8,
          std::to_string(s.size()) + " levels, max rel err " + fmt("%.2e", e_err) + ", orthonormality defect " +
              fmt("%.2e", ortho) + (nodes ? "" : ", node count mismatch")};
}

DipoleCurve tabulated(double slope, double offset) {
  std::vector<CurvePoint> p;
  for (int i = 0; i <= 20; ++i) {
    const double r = 1e-3 + 1000.0 * i;
    p.push_back({r, offset + slope * r});
  }
  return make_dipole(DipoleKind::transition, {"a", "b"}, p);
}

// 3. Radial dipole integral oracles.
Outcome dipole_integral() {
  const double d0 = 0.7;
  const ChannelSpec c{mu_krb, 0, 0.0, make_morse(units::cm1_to_hartree(250.0), 11.0, 0.3, 0.0)};
  const RadialGrid g = default_grid(std::span<const ChannelSpec>(&c, 1));
  const auto s = solve_bound_states(c, g, 0.0, all);
  const DipoleCurve flat = tabulated(0.0, d0);
  double norm = 0.0, orth = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    norm = std::max(norm, rel(transition_dipole(s[i], s[i], flat, g), d0));
    for (std::size_t j = i + 1; j < s.size(); ++j) orth = std::max(orth, transition_dipole(s[i], s[j], flat, g));
  }

  const double w = units::khz_to_angular_au(200.0);
  const std::array<ChannelSpec, 2> sp{ChannelSpec{mu_krb, 0, w, make_flat(0.0)}, ChannelSpec{mu_krb, 1, w, make_flat(0.0)}};
  const RadialGrid og = default_grid(sp, 1e-3);
  const auto s0 = solve_bound_states(sp[0], og, 2.0 * w, 1);
  const auto p0 = solve_bound_states(sp[1], og, 3.0 * w, 1);
  const double gauss = sp[0].trap_length() * std::sqrt(1.5);
  const double g_err = rel(transition_dipole(s0.at(0), p0.at(0), tabulated(1.0, 0.0), og), gauss);
  return {norm < 1e-10 && orth < 1e-8 * d0 && g_err < 1e-6,
          "normalisation " + fmt("%.1e", norm) + ", orthogonality " + fmt("%.1e", orth / d0) + " d0, Gaussian " +
              fmt("%.1e", g_err)};
}

// 4. Trap-frequency scaling on the KRb-like model.
Outcome scaling() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = scaling_study(load_model("krb_like"), {50, 100, 200, 400, 800});
  const double ratio = r.points.back().d_au / r.points.front().d_au;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {r.exponent >= 0.73 && r.exponent <= 0.77 && rel(ratio, 8.0) < 0.03 && secs < 300.0,
          "exponent " + fmt("%.4f", r.exponent) + ", d(16w)/d(w) " + fmt("%.3f", ratio) + ", final v=" +
              std::to_string(r.final_level.v) + " at " + fmt("%.3f", r.final_binding_cm1) + " cm^-1, " +
              fmt("%.1f", secs) + " s"};
}

// 5. Rabi bound.
Outcome rabi() {
  const double o = rabi_frequency(1e-3, 1e4);
  return {o == 0.1 && two_level_ok(0.1, 0.2), "rabi_frequency(1e-3, 1e4) = " + fmt("%.17g", o)};
}

// 6. Raman formula over a (Delta, gamma) sweep.
Outcome raman() {
  double worst = 0.0;
  bool monotone = true;
  const double d1 = 0.37, d2 = 1.9;
  for (int i = 0; i < 10; ++i) {
    const double gamma = 0.1 * std::pow(10.0, 0.3 * i);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10; ++k) {
      const double delta = k == 0 ? 0.0 : 0.05 * std::pow(10.0, 0.4 * k);
      const double want = d1 * d2 / std::sqrt(delta * delta + gamma * gamma / 4);
      const double got = std::abs(raman_effective_dipole(d1, d2, delta, gamma));
      worst = std::max(worst, rel(got, want));
      monotone = monotone && got < prev && std::abs(raman_effective_dipole(d1, d2, -delta, gamma)) == got;
      prev = got;
    }
  }
  return {worst < 1e-12 && monotone, "100 points, max rel err " + fmt("%.1e", worst) + (monotone ? "" : ", not monotone")};
}

double max_d(const ScanResult& r) {
  double m = 0.0;
  for (const auto& rec : r.records) m = std::max(m, rec.d_au);
  return m;
}

// 7. Feshbach enhancement.
Outcome feshbach() {
  std::string detail;
  bool ok = true;
  for (const auto& m : bundled) {
    const SystemConfig sys = load_model(m);
    const double trap = max_d(scan_microwave(sys, LowerState::a));
    const double fb = max_d(scan_feshbach(sys, 0));
    ok = ok && fb > trap && fb >= 5.0 * trap;
    detail += (detail.empty() ? "" : "; ") + m + " " + fmt("%.1f", fb / trap) + "x";
  }
  return {ok, detail};
}

// 8. Shape of the microwave |d| vs E_b table.
Outcome figure_shape() {
  std::string detail;
  bool ok = true;
  for (const auto& m : bundled) {
    const auto r = scan_microwave(load_model(m), LowerState::a);
    int maxima = 0;
    for (std::size_t i = 1; i + 1 < r.records.size(); ++i) {
      maxima += r.records[i].d_au > r.records[i - 1].d_au && r.records[i].d_au > r.records[i + 1].d_au;
    }
    const auto [lo, hi] = std::minmax_element(r.records.begin(), r.records.end(),
                                              [](const auto& x, const auto& y) { return x.d_au < y.d_au; });
    const double decades = std::log10(hi->d_au / lo->d_au);
    ok = ok && maxima >= 1 && decades >= 2.0;
    detail += (detail.empty() ? "" : "; ") + m + " " + std::to_string(maxima) + " interior maxima, " +
              fmt("%.1f", decades) + " decades";
  }
  return {ok, detail};
}

// 9. Determinism, cross-format equality, validate on the fixtures.
Outcome determinism() {
  bool ok = true;
  std::string detail;
  double worst = 0.0;
  for (const auto& m : bundled) {
    const std::string cfg = (models / m / "system.cfg").string();
    std::string a, b, js, v;
    ok = ok && run_cli({"scan-microwave", "--config", cfg}, a) && run_cli({"scan-microwave", "--config", cfg}, b) &&
         run_cli({"scan-microwave", "--config", cfg, "--format", "json"}, js);
    const bool same = a == b;
    const bool valid = run_cli({"validate", "--config", cfg}, v);
    ok = ok && same && valid;

    std::istringstream in(a);
    std::string line;
    std::getline(in, line);
    const auto rows = nlohmann::ordered_json::parse(js)["rows"];
    std::size_t i = 0;
    while (std::getline(in, line) && line.rfind('#', 0) != 0) {
      const auto& row = rows.at(i++);
      std::istringstream cells(line);
      std::string cell;
      for (const auto& [key, val] : row.items()) {
        std::getline(cells, cell, ',');
        if (val.is_number_float()) worst = std::max(worst, std::abs(val.get<double>() - std::stod(cell)) / std::abs(std::stod(cell)));
      }
    }
    ok = ok && i == rows.size();
    detail += (detail.empty() ? "" : "; ") + m + (same ? " byte-identical" : " differs") +
              (valid ? ", validate ok" : ", validate FAILED");
  }
  ok = ok && worst <= 1e-12;
  return {ok, detail + "; CSV/JSON max rel diff " + fmt("%.1e", worst)};
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oscillator oracle", oscillator},
      {"Morse oracle", morse},
      {"dipole integral oracle", dipole_integral},
      {"trap-frequency scaling", scaling},
      {"Rabi bound", rabi},
      {"Raman formula", raman},
      {"Feshbach enhancement", feshbach},
      {"microwave scan shape", figure_shape},
      {"determinism and formats", determinism},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << n << " " << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
