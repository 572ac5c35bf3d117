#pragma once

#include "mwassoc/gridsolve.hpp"
#include "mwassoc/potentials.hpp"
#include "mwassoc/transitions.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mwassoc {

/// An excited electronic state usable as a Raman intermediate.
struct ExcitedState {
  PotentialCurve curve;
  std::optional<DipoleCurve> to_a; // transition dipole to the a state
  std::optional<DipoleCurve> to_x; // transition dipole to the X state
};

struct SystemConfig {
  double mass1_amu = 0.0;
  double mass2_amu = 0.0;
  std::optional<PotentialCurve> a_state;
  std::optional<PotentialCurve> x_state;
  std::optional<DipoleCurve> a_dipole; // permanent
  std::optional<DipoleCurve> x_dipole; // permanent
  std::vector<ExcitedState> excited;
  double trap_khz = 200.0; // omega / 2 pi
  double intensity_wcm2 = 1e4;
  double angular_c = 1.0;
  double phase_step = default_phase_step;
  /// Overrides default_bounds for every scan grid.
  std::optional<GridBounds> bounds;
  /// 0: take MWASSOC_WORKERS from the environment, else one per core.
  unsigned workers = 0;

  /// m1 m2 / (m1 + m2) in electron masses.
  double reduced_mass() const;
  /// Throws ConfigError on non-positive masses, trap or intensity < 0, ...
  void check() const;
};

enum class LowerState { a, x };

const char* to_string(LowerState s);

struct ScanResult {
  LevelId initial;
  double initial_binding_cm1 = 0.0; // relative to the trap-free asymptote
  double initial_mean_r = 0.0;
  std::vector<TransitionRecord> records; // sorted by final binding energy, deepest first
};

struct MicrowaveOptions {
  /// Keep only finals with lo < E_b < hi (cm^-1).
  std::optional<std::pair<double, double>> binding_window_cm1;
};

/// Transitions from the lowest trap-dominated l=0 level (trap on) to every
/// molecular l=1 level of the same potential (trap off).
///
/// Throws ClassificationError when no trap-dominated initial level exists,
/// ConfigError when the state or its permanent dipole is missing.
ScanResult scan_microwave(const SystemConfig& sys, LowerState state, const MicrowaveOptions& options = {});

/// Transitions from the l=0 level `from_top` below the last bound one (trap
/// off) to every deeper l=1 level of the a state.
///
/// Throws std::invalid_argument unless from_top is 0 or 1.
ScanResult scan_feshbach(const SystemConfig& sys, int from_top);

struct RamanOptions {
  /// a-state l=1 level; nullopt picks the level with the largest microwave dipole.
  std::optional<int> initial_v;
  double detuning_mhz = 0.0;
  double linewidth_mhz = 0.0; // required, no default in physical terms
};

struct RamanResult {
  LevelId initial;
  LevelId final_level;
  std::vector<RamanRecord> records; // grouped by excited curve, then by binding energy
};

/// Two-photon a(v, l=1) -> excited(v') -> X(v=0, l=1) pathways.
///
/// Throws ConfigError when a leg has no transition dipole.
RamanResult scan_raman(const SystemConfig& sys, const RamanOptions& options);

struct ScalingPoint {
  double trap_khz = 0.0;
  double d_au = 0.0;
  double residual = 0.0; // log d - fit
};

struct ScalingResult {
  LevelId final_level;
  double final_binding_cm1 = 0.0;
  double exponent = 0.0;
  double intercept = 0.0; // of log d vs log(trap kHz)
  std::vector<ScalingPoint> points;
};

struct ScalingOptions {
  LowerState state = LowerState::a;
  double target_binding_cm1 = -1.0;
  /// Window on |E_b| for the final level, cm^-1.
  double min_binding_cm1 = 0.1;
  double max_binding_cm1 = 10.0;
};

/// Dipole from the trap level to one fixed weakly bound l=1 level versus
/// trap frequency, with the least-squares slope of log d against log omega.
///
/// Throws std::invalid_argument for non-positive frequencies, fewer than four
/// of them or a span under one decade.
ScalingResult scaling_study(const SystemConfig& sys, const std::vector<double>& trap_khz,
                            const ScalingOptions& options = {});

/// Worker count from sys.workers, MWASSOC_WORKERS or the core count.
unsigned resolve_workers(unsigned requested);

/// Runs body(i) for i in [0, n) on `workers` threads. Each index is visited
/// once; the first exception thrown is rethrown after all threads join.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

} // namespace mwassoc
