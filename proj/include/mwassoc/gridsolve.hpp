#pragma once

#include "mwassoc/potentials.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

/**
 * @file gridsolve.hpp
 * @brief Bound states of the radial Schroedinger equation on a mapped grid.
 *
 * The grid spacing follows the local de Broglie wavelength of the channel(s)
 * it is built for, so one grid resolves a deep molecular well at ~1e-2 bohr
 * and a harmonic trap spanning thousands of bohr. On that grid the radial
 * operator is discretised with piecewise-linear elements and a lumped
 * (trapezoidal) mass matrix; the symmetric scaling c_i = sqrt(w_i) u_i turns
 * this into a standard symmetric tridiagonal eigenproblem. Eigenpairs are
 * obtained by bisection and inverse iteration (LAPACK dstevr).
 *
 * Boundary conditions are u(R_min) = u(R_max) = 0.
 */

namespace mwassoc {

struct GridMapping {
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t nodes = 0;
  std::string kind;         // "local-wavelength"
  double phase_total = 0.0; // integral of the mapping wavenumber over [r_min, r_max]
};

struct RadialGrid {
  std::vector<double> r;       // nodes, r.front() == r_min, r.back() == r_max
  std::vector<double> weights; // trapezoidal weights for integrals over dR
  GridMapping mapping;
  std::uint64_t id = 0; // fingerprint of the node set

  std::size_t size() const noexcept { return r.size(); }
};

struct GridBounds {
  double r_min = 0.0;
  double r_max = 0.0;
};

/// Node-spacing target in radians of mapping phase per interval.
inline constexpr double default_phase_step = 2.5e-3;

/// Build a grid resolving every channel in `channels`.
///
/// Throws ConfigError when r_max is below six trap lengths of a trapped
/// channel, and std::invalid_argument for r_min <= 0, r_max <= r_min or
/// n < 200.
RadialGrid build_grid(std::span<const ChannelSpec> channels, double r_min, double r_max, std::size_t n);
RadialGrid build_grid(const ChannelSpec& channel, double r_min, double r_max, std::size_t n);

/// Total mapping phase over [r_min, r_max] divided by `phase_step`, at least 200.
std::size_t suggest_node_count(std::span<const ChannelSpec> channels, double r_min, double r_max,
                               double phase_step = default_phase_step);

/// Inner bound where every curve is well into its repulsive wall; outer bound
/// of ten trap lengths (trapped channels) or six classification radii.
GridBounds default_bounds(std::span<const ChannelSpec> channels);

/// Grid with default bounds and suggested node count.
RadialGrid default_grid(std::span<const ChannelSpec> channels, double phase_step = default_phase_step);

/// Outermost classical turning point of the trap-free curve at
/// E = asymptote - 1e-8 hartree; nullopt if there is none.
std::optional<double> outer_turning_point(const PotentialCurve& curve);

/// Separation beyond which a state counts as trap dominated: three times
/// the outer turning point, or 100 bohr when there is no turning point.
double classification_radius(const PotentialCurve& curve);

enum class StateClass { molecular, trap_dominated };

const char* to_string(StateClass c);

struct BoundState {
  std::string label; // electronic state label of the channel curve
  double energy = 0.0;         // absolute, hartree
  double binding_energy = 0.0; // energy - trap-free asymptote, hartree
  std::vector<double> psi;     // u(R) = R phi(R) on the grid nodes
  int v = 0;                   // node count
  int ell = 0;
  StateClass classification = StateClass::molecular;
  double mean_r = 0.0;
  std::uint64_t grid_id = 0;
};

struct SolveOptions {
  /// Lower energy bound (absolute, hartree); states at or below are skipped.
  std::optional<double> e_min;
  /// Overrides classification_radius(channel.curve).
  std::optional<double> r_class;
};

/// All eigenstates with e_min < E < e_max, lowest first, at most max_states.
///
/// Throws NumericalError when the discretised operator has non-finite
/// entries; the message names the offending R.
std::vector<BoundState> solve_bound_states(const ChannelSpec& channel, const RadialGrid& grid, double e_max,
                                           std::size_t max_states, const SolveOptions& options = {});

/// Interior sign changes of u, ignoring samples below 1e-12 max|u|.
int count_nodes(const BoundState& state);
int count_nodes(std::span<const double> psi);

/// <R> = integral of R |u|^2 dR with the grid weights.
double mean_radius(const BoundState& state, const RadialGrid& grid);

/// Integral of u_a(R) u_b(R) dR with the grid weights.
double overlap(std::span<const double> a, std::span<const double> b, const RadialGrid& grid);

struct ConvergenceReport {
  std::size_t base_nodes = 0;
  std::size_t refined_nodes = 0;
  double base_r_max = 0.0;
  double refined_r_max = 0.0;
  std::vector<double> base_energies;    // hartree
  std::vector<double> refined_energies; // hartree
  /// max |E_refined - E_base| / |E_base - asymptote| over compared levels.
  double max_relative_drift = 0.0;
  bool same_level_count = true;
};

/// Re-solve the channel with node count and r_max doubled and compare all
/// levels below e_target.
ConvergenceReport convergence_check(const ChannelSpec& channel, double e_target, GridBounds bounds, std::size_t n);
ConvergenceReport convergence_check(const ChannelSpec& channel, double e_target);

} // namespace mwassoc
