#include "mwassoc/scans.hpp"

#include "mwassoc/errors.hpp"
#include "mwassoc/units.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mwassoc {

namespace {

constexpr std::size_t all_states = std::numeric_limits<std::size_t>::max();

struct Lower {
  const PotentialCurve& curve;
  const DipoleCurve& dipole;
};

Lower lower_state(const SystemConfig& sys, LowerState s) {
  const auto& curve = s == LowerState::a ? sys.a_state : sys.x_state;
  const auto& dip = s == LowerState::a ? sys.a_dipole : sys.x_dipole;
  const std::string name = to_string(s);
  if (!curve) throw ConfigError("system has no " + name + "-state potential");
  if (!dip) throw ConfigError("system has no permanent dipole for the " + name + " state");
  return {*curve, *dip};
}

ChannelSpec channel(const SystemConfig& sys, const PotentialCurve& curve, int ell, double trap_khz) {
  return ChannelSpec{sys.reduced_mass(), ell, trap_khz > 0.0 ? units::khz_to_angular_au(trap_khz) : 0.0, curve};
}

RadialGrid scan_grid(const SystemConfig& sys, std::span<const ChannelSpec> channels) {
  const GridBounds b = sys.bounds ? *sys.bounds : default_bounds(channels);
  return build_grid(channels, b.r_min, b.r_max, suggest_node_count(channels, b.r_min, b.r_max, sys.phase_step));
}

std::vector<BoundState> molecular_levels(const ChannelSpec& ch, const RadialGrid& grid) {
  auto states = solve_bound_states(ch, grid, ch.curve.asymptote(), all_states);
  std::erase_if(states, [](const BoundState& s) { return s.classification != StateClass::molecular; });
  return states;
}

BoundState trap_level(const ChannelSpec& ch, const RadialGrid& grid) {
  const double asym = ch.curve.asymptote();
  SolveOptions opt;
  opt.e_min = asym;
  const auto states = solve_bound_states(ch, grid, asym + 4.0 * ch.trap_omega, all_states, opt);
  for (const auto& s : states) {
    if (s.classification == StateClass::trap_dominated) return s;
  }
  throw ClassificationError("no trap-dominated l=0 level of '" + ch.curve.label() + "' within 4 hbar omega of the asymptote");
}

LevelId id_of(const BoundState& s) { return {s.label, s.v, s.ell}; }

std::vector<TransitionRecord> records_from(const SystemConfig& sys, const BoundState& initial,
                                           const std::vector<BoundState>& finals, const DipoleCurve& d,
                                           const RadialGrid& grid) {
  std::vector<TransitionRecord> out(finals.size());
  const double trap_mhz = sys.trap_khz * 1e-3;
  parallel_for(finals.size(), resolve_workers(sys.workers), [&](std::size_t k) {
    const auto& f = finals[k];
    auto& rec = out[k];
    rec.initial = id_of(initial);
    rec.final_level = id_of(f);
    rec.final_binding_cm1 = units::hartree_to_cm1(f.binding_energy);
    rec.d_au = transition_dipole(initial, f, d, grid);
    rec.angular_c = sys.angular_c;
    rec.d_rabi = units::dipole_au_to_rabi_units(rec.d_au) * sys.angular_c;
    rec.rabi_mhz = rabi_frequency(rec.d_rabi, sys.intensity_wcm2);
    rec.two_level_ok = two_level_ok(rec.rabi_mhz, trap_mhz);
  });
  std::stable_sort(out.begin(), out.end(), [](const TransitionRecord& x, const TransitionRecord& y) {
    return x.final_binding_cm1 < y.final_binding_cm1;
  });
  return out;
}

} // namespace

const char* to_string(LowerState s) { return s == LowerState::a ? "a" : "X"; }

double SystemConfig::reduced_mass() const {
  return units::amu_to_electron_masses(mass1_amu * mass2_amu / (mass1_amu + mass2_amu));
}

void SystemConfig::check() const {
  if (!(mass1_amu > 0.0) || !(mass2_amu > 0.0) || !std::isfinite(mass1_amu) || !std::isfinite(mass2_amu)) {
    throw ConfigError("masses must be finite and > 0 amu");
  }
  if (!(trap_khz >= 0.0) || !std::isfinite(trap_khz)) throw ConfigError("trap_kHz must be finite and >= 0");
  if (!(intensity_wcm2 >= 0.0) || !std::isfinite(intensity_wcm2)) {
    throw ConfigError("intensity_Wcm2 must be finite and >= 0");
  }
  if (!std::isfinite(angular_c)) throw ConfigError("angular_C must be finite");
  if (!(phase_step > 0.0) || phase_step > 0.5) throw ConfigError("phase_step must lie in (0, 0.5]");
  if (bounds && !(bounds->r_min > 0.0 && bounds->r_max > bounds->r_min)) {
    throw ConfigError("grid bounds need 0 < r_min < r_max");
  }
}

ScanResult scan_microwave(const SystemConfig& sys, LowerState state, const MicrowaveOptions& options) {
  sys.check();
  if (!(sys.trap_khz > 0.0)) throw ConfigError("microwave scans need trap_kHz > 0");
  const Lower low = lower_state(sys, state);
  const std::array<ChannelSpec, 2> chans{channel(sys, low.curve, 0, sys.trap_khz), channel(sys, low.curve, 1, 0.0)};
  const RadialGrid grid = scan_grid(sys, chans);

  const BoundState initial = trap_level(chans[0], grid);
  auto finals = molecular_levels(chans[1], grid);
  if (options.binding_window_cm1) {
    const auto [lo, hi] = *options.binding_window_cm1;
    std::erase_if(finals, [&](const BoundState& s) {
      const double eb = units::hartree_to_cm1(s.binding_energy);
      return !(eb > lo && eb < hi);
    });
  }

  ScanResult out;
  out.initial = id_of(initial);
  out.initial_binding_cm1 = units::hartree_to_cm1(initial.binding_energy);
  out.initial_mean_r = initial.mean_r;
  out.records = records_from(sys, initial, finals, low.dipole, grid);
  return out;
}

ScanResult scan_feshbach(const SystemConfig& sys, int from_top) {
  if (from_top != 0 && from_top != 1) throw std::invalid_argument("from_top must be 0 or 1");
  sys.check();
  const Lower low = lower_state(sys, LowerState::a);
  // Same grid as the microwave scan so the two scans are directly comparable.
  const std::array<ChannelSpec, 2> chans{channel(sys, low.curve, 0, sys.trap_khz), channel(sys, low.curve, 1, 0.0)};
  const RadialGrid grid = scan_grid(sys, chans);

  const ChannelSpec s_wave = channel(sys, low.curve, 0, 0.0);
  const auto s_levels = molecular_levels(s_wave, grid);
  if (s_levels.size() < static_cast<std::size_t>(from_top) + 1) {
    throw std::invalid_argument("the a state has fewer than " + std::to_string(from_top + 1) + " bound l=0 levels");
  }
  const BoundState& initial = s_levels[s_levels.size() - 1 - static_cast<std::size_t>(from_top)];

  auto finals = molecular_levels(chans[1], grid);
  std::erase_if(finals, [&](const BoundState& s) { return !(s.energy < initial.energy); });

  ScanResult out;
  out.initial = id_of(initial);
  out.initial_binding_cm1 = units::hartree_to_cm1(initial.binding_energy);
  out.initial_mean_r = initial.mean_r;
  out.records = records_from(sys, initial, finals, low.dipole, grid);
  return out;
}

RamanResult scan_raman(const SystemConfig& sys, const RamanOptions& options) {
  sys.check();
  if (!sys.a_state) throw ConfigError("system has no a-state potential");
  if (!sys.x_state) throw ConfigError("system has no X-state potential");
  if (sys.excited.empty()) throw ConfigError("system has no excited states for Raman intermediates");
  for (const auto& ex : sys.excited) {
    if (!ex.to_a) throw ConfigError("no transition dipole between '" + ex.curve.label() + "' and the a state");
    if (!ex.to_x) throw ConfigError("no transition dipole between '" + ex.curve.label() + "' and the X state");
  }
  // Validate the formula inputs before any solving.
  raman_effective_dipole(1.0, 1.0, options.detuning_mhz, options.linewidth_mhz, sys.angular_c);

  int initial_v = 0;
  if (options.initial_v) {
    initial_v = *options.initial_v;
  } else {
    const auto mw = scan_microwave(sys, LowerState::a);
    if (mw.records.empty()) throw NumericalError("microwave scan found no a-state l=1 levels");
    const auto best = std::max_element(mw.records.begin(), mw.records.end(),
                                       [](const auto& x, const auto& y) { return x.d_au < y.d_au; });
    initial_v = best->final_level.v;
  }

  std::vector<ChannelSpec> chans{channel(sys, *sys.a_state, 1, 0.0), channel(sys, *sys.x_state, 1, 0.0)};
  for (const auto& ex : sys.excited) chans.push_back(channel(sys, ex.curve, 1, 0.0));
  const RadialGrid grid = scan_grid(sys, chans);

  const auto a_levels = molecular_levels(chans[0], grid);
  const auto a_it = std::find_if(a_levels.begin(), a_levels.end(), [&](const auto& s) { return s.v == initial_v; });
  if (a_it == a_levels.end()) {
    throw std::invalid_argument("the a state has no bound l=1 level v=" + std::to_string(initial_v));
  }
  const auto x_levels = solve_bound_states(chans[1], grid, sys.x_state->asymptote(), 1);
  if (x_levels.empty()) throw NumericalError("the X state has no bound l=1 level");
  const BoundState& initial = *a_it;
  const BoundState& final_state = x_levels.front();

  RamanResult out;
  out.initial = id_of(initial);
  out.final_level = id_of(final_state);
  for (std::size_t c = 0; c < sys.excited.size(); ++c) {
    const auto& ex = sys.excited[c];
    const auto mids = molecular_levels(chans[2 + c], grid);
    std::vector<RamanRecord> recs(mids.size());
    parallel_for(mids.size(), resolve_workers(sys.workers), [&](std::size_t k) {
      const auto& m = mids[k];
      auto& r = recs[k];
      r.intermediate = id_of(m);
      r.intermediate_binding_cm1 = units::hartree_to_cm1(m.binding_energy);
      r.d1_au = transition_dipole(initial, m, *ex.to_a, grid);
      r.d2_au = transition_dipole(m, final_state, *ex.to_x, grid);
      r.product_au = r.d1_au * r.d2_au;
      r.detuning_mhz = options.detuning_mhz;
      r.linewidth_mhz = options.linewidth_mhz;
      r.d_eff = raman_effective_dipole(units::dipole_au_to_rabi_units(r.d1_au),
                                       units::dipole_au_to_rabi_units(r.d2_au), options.detuning_mhz,
                                       options.linewidth_mhz, sys.angular_c);
    });
    std::stable_sort(recs.begin(), recs.end(), [](const RamanRecord& x, const RamanRecord& y) {
      return x.intermediate_binding_cm1 < y.intermediate_binding_cm1;
    });
    out.records.insert(out.records.end(), recs.begin(), recs.end());
  }
  return out;
}

ScalingResult scaling_study(const SystemConfig& sys, const std::vector<double>& trap_khz,
                            const ScalingOptions& options) {
  if (trap_khz.size() < 4) throw std::invalid_argument("scaling study needs at least four trap frequencies");
  for (double f : trap_khz) {
    if (!(f > 0.0) || !std::isfinite(f)) throw std::invalid_argument("trap frequencies must be finite and > 0");
  }
  const auto [lo, hi] = std::minmax_element(trap_khz.begin(), trap_khz.end());
  if (*hi < 10.0 * *lo) throw std::invalid_argument("trap frequencies must span at least one decade");
  if (!(options.min_binding_cm1 > 0.0) || !(options.max_binding_cm1 > options.min_binding_cm1)) {
    throw std::invalid_argument("scaling window needs 0 < min_binding < max_binding");
  }
  sys.check();
  const Lower low = lower_state(sys, options.state);

  struct Sample {
    int v = 0;
    double eb = 0.0;
    double d = 0.0;
  };
  std::vector<Sample> samples(trap_khz.size());
  parallel_for(trap_khz.size(), resolve_workers(sys.workers), [&](std::size_t k) {
    const std::array<ChannelSpec, 2> chans{channel(sys, low.curve, 0, trap_khz[k]), channel(sys, low.curve, 1, 0.0)};
    const RadialGrid grid = scan_grid(sys, chans);
    const BoundState initial = trap_level(chans[0], grid);
    const auto finals = molecular_levels(chans[1], grid);
    const BoundState* best = nullptr;
    for (const auto& f : finals) {
      const double eb = units::hartree_to_cm1(f.binding_energy);
      if (-eb < options.min_binding_cm1 || -eb > options.max_binding_cm1) continue;
      if (!best || std::abs(eb - options.target_binding_cm1) <
                       std::abs(units::hartree_to_cm1(best->binding_energy) - options.target_binding_cm1)) {
        best = &f;
      }
    }
    if (!best) throw NumericalError("no l=1 level in the scaling window");
    samples[k] = {best->v, units::hartree_to_cm1(best->binding_energy),
                  transition_dipole(initial, *best, low.dipole, grid)};
  });
  for (const auto& s : samples) {
    if (s.v != samples.front().v) throw NumericalError("scaling study picked different final levels across frequencies");
  }

  // Least squares in log-log.
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double x = std::log(trap_khz[k]);
    const double y = std::log(samples[k].d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  ScalingResult out;
  out.final_level = {low.curve.label(), samples.front().v, 1};
  out.final_binding_cm1 = samples.front().eb;
  out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.intercept = (sy - out.exponent * sx) / n;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double fit = out.intercept + out.exponent * std::log(trap_khz[k]);
    out.points.push_back({trap_khz[k], samples[k].d, std::log(samples[k].d) - fit});
  }
  return out;
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MWASSOC_WORKERS"); env && *env) {
    unsigned v = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec == std::errc() && ptr == end && v > 0) return v;
    throw ConfigError("MWASSOC_WORKERS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t t = std::min<std::size_t>(std::max(1u, workers), n);
  if (t == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex m;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (!first) first = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < t; ++k) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

} // namespace mwassoc
