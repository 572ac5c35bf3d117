#include "mwassoc/gridsolve.hpp"

#include "mwassoc/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mwassoc {

namespace {

constexpr double turning_energy = 1e-8;    // hartree below the asymptote
constexpr double fallback_r_class = 100.0; // bohr
constexpr std::size_t pregrid_points = 200001;

// Parameters of the local-wavenumber mapping for one channel.
struct MappingTerm {
  const ChannelSpec* channel;
  double e_ref;   // absolute
  double k_floor; // 1/bohr
  double cap;     // hartree

  double wavenumber(double r) const {
    const double gap = std::min(std::abs(e_ref - effective_potential(*channel, r)), cap);
    return std::sqrt(k_floor * k_floor + 2.0 * channel->reduced_mass * gap);
  }
};

MappingTerm mapping_term(const ChannelSpec& c) {
  c.check();
  const double asym = c.curve.asymptote();
  const double v_min = c.curve.minimum().second;
  MappingTerm t{&c, asym + 5.0 * c.trap_omega, 0.0, 0.0};
  if (c.trap_omega > 0.0) {
    t.k_floor = 1.0 / c.trap_length();
  } else {
    if (c.curve.form() == PotentialCurve::Form::flat) {
      throw std::invalid_argument("a flat curve without a trap has no bound states");
    }
    t.k_floor = 1.0 / outer_turning_point(c.curve).value_or(fallback_r_class);
  }
  t.cap = std::max(t.e_ref - v_min, t.k_floor * t.k_floor / (2.0 * c.reduced_mass));
  return t;
}

struct PhaseTable {
  std::vector<double> r;
  std::vector<double> phase;
};

// Cumulative mapping phase on a geometric pre-grid.
PhaseTable phase_table(std::span<const ChannelSpec> channels, double r_min, double r_max) {
  std::vector<MappingTerm> terms;
  terms.reserve(channels.size());
  for (const auto& c : channels) terms.push_back(mapping_term(c));

  PhaseTable t;
  t.r.resize(pregrid_points);
  t.phase.resize(pregrid_points);
  const double log_ratio = std::log(r_max / r_min);
  double k_prev = 0.0;
  for (std::size_t j = 0; j < pregrid_points; ++j) {
    const double r = j + 1 == pregrid_points
                         ? r_max
                         : r_min * std::exp(log_ratio * static_cast<double>(j) / (pregrid_points - 1));
    double k = 0.0;
    for (const auto& term : terms) k = std::max(k, term.wavenumber(r));
    if (!std::isfinite(k)) {
      std::ostringstream msg;
      msg << "non-finite potential while building grid at R = " << r << " bohr";
      throw NumericalError(msg.str());
    }
    t.r[j] = r;
    t.phase[j] = j == 0 ? 0.0 : t.phase[j - 1] + 0.5 * (k + k_prev) * (r - t.r[j - 1]);
    k_prev = k;
  }
  return t;
}

void check_bounds(std::span<const ChannelSpec> channels, double r_min, double r_max) {
  if (channels.empty()) throw std::invalid_argument("build_grid: no channels given");
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
    throw std::invalid_argument("build_grid: need 0 < r_min < r_max");
  }
  for (const auto& c : channels) {
    c.check();
    if (c.trap_omega > 0.0 && r_max < 6.0 * c.trap_length()) {
      std::ostringstream msg;
      msg << "grid adequacy: r_max = " << r_max << " bohr is below six trap lengths (6 a = "
          << 6.0 * c.trap_length() << " bohr, a = sqrt(1/(mu omega)))";
      throw ConfigError(msg.str());
    }
  }
}

std::uint64_t fingerprint(const std::vector<double>& r) {
  std::uint64_t h = 1469598103934665603ull;
  for (double x : r) {
    h ^= std::bit_cast<std::uint64_t>(x);
    h *= 1099511628211ull;
  }
  return h;
}

// Number of eigenvalues of the symmetric tridiagonal (d, e) below x.
std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = i == 0 ? 0.0 : e[i - 1];
    q = d[i] - x - (i == 0 ? 0.0 : off * off / q);
    if (q == 0.0) q = -DBL_MIN * 1e3;
    if (q < 0.0) ++count;
  }
  return count;
}

} // namespace

RadialGrid build_grid(std::span<const ChannelSpec> channels, double r_min, double r_max, std::size_t n) {
  check_bounds(channels, r_min, r_max);
  if (n < 200) throw std::invalid_argument("build_grid: need at least 200 nodes");

  const PhaseTable table = phase_table(channels, r_min, r_max);
  const double total = table.phase.back();

  RadialGrid grid;
  grid.r.resize(n);
  grid.r.front() = r_min;
  grid.r.back() = r_max;
  std::size_t j = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = total * static_cast<double>(i) / static_cast<double>(n - 1);
    while (j + 2 < table.phase.size() && table.phase[j + 1] <= x) ++j;
    const double f = (x - table.phase[j]) / (table.phase[j + 1] - table.phase[j]);
    grid.r[i] = table.r[j] + f * (table.r[j + 1] - table.r[j]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(grid.r[i] > grid.r[i - 1])) {
      throw NumericalError("grid mapping produced non-increasing nodes near R = " + std::to_string(grid.r[i]));
    }
  }

  grid.weights.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = grid.r[i + 1] - grid.r[i];
    grid.weights[i] += 0.5 * h;
    grid.weights[i + 1] += 0.5 * h;
  }
  grid.mapping = {r_min, r_max, n, "local-wavelength", total};
  grid.id = fingerprint(grid.r);
  return grid;
}

RadialGrid build_grid(const ChannelSpec& channel, double r_min, double r_max, std::size_t n) {
  return build_grid(std::span<const ChannelSpec>(&channel, 1), r_min, r_max, n);
}

std::size_t suggest_node_count(std::span<const ChannelSpec> channels, double r_min, double r_max,
                               double phase_step) {
  check_bounds(channels, r_min, r_max);
  if (!(phase_step > 0.0)) throw std::invalid_argument("phase step must be positive");
  const double total = phase_table(channels, r_min, r_max).phase.back();
  return std::max<std::size_t>(200, static_cast<std::size_t>(std::ceil(total / phase_step)) + 1);
}

std::optional<double> outer_turning_point(const PotentialCurve& curve) {
  if (curve.form() == PotentialCurve::Form::flat) return std::nullopt;
  const double target = curve.asymptote() - turning_energy;
  // Walk inwards from far outside until the curve dips below the target.
  double hi = 1.0e5;
  if (curve(hi) <= target) return std::nullopt;
  double lo = hi;
  const double r_floor = std::max(curve.minimum().first, 1e-3);
  while (true) {
    lo = hi / 1.05;
    if (lo < r_floor) return std::nullopt;
    if (curve(lo) <= target) break;
    hi = lo;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (curve(mid) <= target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double classification_radius(const PotentialCurve& curve) {
  const auto turn = outer_turning_point(curve);
  return turn ? 3.0 * *turn : fallback_r_class;
}

GridBounds default_bounds(std::span<const ChannelSpec> channels) {
  if (channels.empty()) throw std::invalid_argument("default_bounds: no channels given");
  GridBounds b{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& c : channels) {
    c.check();
    const auto& curve = c.curve;
    if (curve.form() == PotentialCurve::Form::flat) {
      if (c.trap_omega <= 0.0) throw std::invalid_argument("a flat curve without a trap has no bound states");
      b.r_min = std::min(b.r_min, 1e-8 * c.trap_length());
    } else {
      // Inner bound: wall at asymptote + 2 * depth.
      const auto [r_eq, v_min] = curve.minimum();
      const double target = curve.asymptote() + 2.0 * (curve.asymptote() - v_min);
      double r = r_eq;
      while (r > 1e-3 && curve(r) < target) r *= 0.98;
      b.r_min = std::min(b.r_min, std::max(r, 1e-3));
    }
    const double outer = c.trap_omega > 0.0 ? 10.0 * c.trap_length() : 6.0 * classification_radius(curve);
    b.r_max = std::max(b.r_max, outer);
  }
  return b;
}

RadialGrid default_grid(std::span<const ChannelSpec> channels, double phase_step) {
  const GridBounds b = default_bounds(channels);
  return build_grid(channels, b.r_min, b.r_max, suggest_node_count(channels, b.r_min, b.r_max, phase_step));
}

const char* to_string(StateClass c) {
  return c == StateClass::molecular ? "molecular" : "trap_dominated";
}

std::vector<BoundState> solve_bound_states(const ChannelSpec& channel, const RadialGrid& grid, double e_max,
                                           std::size_t max_states, const SolveOptions& options) {
  channel.check();
  const std::size_t n = grid.size();
  if (n < 3 || grid.weights.size() != n) throw std::invalid_argument("solve_bound_states: malformed grid");
  const std::size_t m = n - 2; // interior unknowns
  const double asym = channel.curve.asymptote();
  const double inv2mu = 0.5 / channel.reduced_mass;

  // Work relative to the asymptote so near-threshold levels keep their digits.
  std::vector<double> d(m), e(m > 1 ? m - 1 : 1, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h_left = grid.r[i] - grid.r[i - 1];
    const double h_right = grid.r[i + 1] - grid.r[i];
    const double v = effective_potential(channel, grid.r[i]) - asym;
    d[i - 1] = inv2mu * (1.0 / h_left + 1.0 / h_right) / grid.weights[i] + v;
    if (i + 2 < n) e[i - 1] = -inv2mu / h_right / std::sqrt(grid.weights[i] * grid.weights[i + 1]);
    if (!std::isfinite(d[i - 1]) || !std::isfinite(e[i - 1])) {
      std::ostringstream msg;
      msg << "non-finite Hamiltonian entry at R = " << grid.r[i] << " bohr";
      throw NumericalError(msg.str());
    }
  }

  const double lower = options.e_min ? *options.e_min - asym : -std::numeric_limits<double>::infinity();
  const std::size_t below_min = std::isfinite(lower) ? sturm_count(d, e, lower) : 0;
  const std::size_t below_max = sturm_count(d, e, e_max - asym);
  if (below_max <= below_min || max_states == 0) return {};
  const std::size_t il = below_min + 1;
  const std::size_t iu = below_max - below_min > max_states ? below_min + max_states : below_max;
  const std::size_t count = iu - il + 1;

  std::vector<double> eigenvalues(m);
  std::vector<double> vectors(m * count);
  std::vector<lapack_int> support(2 * count);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', static_cast<lapack_int>(m), d.data(), e.data(),
                                         0.0, 0.0, static_cast<lapack_int>(il), static_cast<lapack_int>(iu),
                                         2.0 * DBL_MIN, &found, eigenvalues.data(), vectors.data(),
                                         static_cast<lapack_int>(m), support.data());
  if (info != 0 || static_cast<std::size_t>(found) != count) {
    throw NumericalError("tridiagonal eigensolver failed (info = " + std::to_string(info) + ")");
  }

  const double r_class = options.r_class.value_or(classification_radius(channel.curve));
  std::vector<BoundState> states;
  states.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    BoundState s;
    s.label = channel.curve.label();
    s.binding_energy = eigenvalues[k];
    s.energy = eigenvalues[k] + asym;
    s.ell = channel.ell;
    s.grid_id = grid.id;
    s.psi.assign(n, 0.0);
    const double* c = vectors.data() + k * m;
    double peak = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      s.psi[i + 1] = c[i] / std::sqrt(grid.weights[i + 1]);
      peak = std::max(peak, std::abs(s.psi[i + 1]));
    }
    // Sign convention: the innermost appreciable lobe is positive.
    for (double u : s.psi) {
      if (std::abs(u) > 1e-3 * peak) {
        if (u < 0.0) {
          for (auto& x : s.psi) x = -x;
        }
        break;
      }
    }
    s.v = count_nodes(s.psi);
    s.mean_r = mean_radius(s, grid);
    s.classification = s.mean_r > r_class ? StateClass::trap_dominated : StateClass::molecular;
    states.push_back(std::move(s));
  }
  return states;
}

int count_nodes(std::span<const double> psi) {
  double peak = 0.0;
  for (double u : psi) peak = std::max(peak, std::abs(u));
  const double cutoff = 1e-12 * peak;
  int nodes = 0;
  int last_sign = 0;
  for (double u : psi) {
    if (std::abs(u) < cutoff) continue;
    const int sign = u > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

int count_nodes(const BoundState& state) { return count_nodes(state.psi); }

double mean_radius(const BoundState& state, const RadialGrid& grid) {
  if (state.psi.size() != grid.size()) throw std::invalid_argument("mean_radius: state is not on this grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * grid.r[i] * state.psi[i] * state.psi[i];
  return sum;
}

double overlap(std::span<const double> a, std::span<const double> b, const RadialGrid& grid) {
  if (a.size() != grid.size() || b.size() != grid.size()) {
    throw std::invalid_argument("overlap: wavefunctions are not on this grid");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * (a[i] * b[i]);
  return sum;
}

ConvergenceReport convergence_check(const ChannelSpec& channel, double e_target, GridBounds bounds,
                                    std::size_t n) {
  ConvergenceReport report;
  report.base_nodes = n;
  report.refined_nodes = 2 * n;
  report.base_r_max = bounds.r_max;
  report.refined_r_max = 2.0 * bounds.r_max;

  constexpr std::size_t all = std::numeric_limits<std::size_t>::max();
  const auto base = solve_bound_states(channel, build_grid(channel, bounds.r_min, bounds.r_max, n), e_target, all);
  const auto refined =
      solve_bound_states(channel, build_grid(channel, bounds.r_min, 2.0 * bounds.r_max, 2 * n), e_target, all);
  report.same_level_count = base.size() == refined.size();
  const double asym = channel.curve.asymptote();
  for (std::size_t i = 0; i < std::min(base.size(), refined.size()); ++i) {
    report.base_energies.push_back(base[i].energy);
    report.refined_energies.push_back(refined[i].energy);
    const double drift = std::abs(refined[i].energy - base[i].energy) / std::abs(base[i].energy - asym);
    report.max_relative_drift = std::max(report.max_relative_drift, drift);
  }
  return report;
}

ConvergenceReport convergence_check(const ChannelSpec& channel, double e_target) {
  const std::span<const ChannelSpec> one(&channel, 1);
  const GridBounds b = default_bounds(one);
  return convergence_check(channel, e_target, b, suggest_node_count(one, b.r_min, b.r_max));
}

} // namespace mwassoc
