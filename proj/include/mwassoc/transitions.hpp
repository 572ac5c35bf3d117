#pragma once

#include "mwassoc/gridsolve.hpp"
#include "mwassoc/potentials.hpp"

#include <complex>
#include <string>

namespace mwassoc {

struct LevelId {
  std::string label; // electronic state
  int v = 0;
  int ell = 0;

  bool operator==(const LevelId&) const = default;
};

/// One association transition, as tabulated by the scans.
struct TransitionRecord {
  LevelId initial;
  LevelId final_level;
  double final_binding_cm1 = 0.0;
  double d_au = 0.0;        // |<f|d|i>| without the angular factor, e*a0
  double d_rabi = 0.0;      // dipole_au_to_rabi_units(d_au) * angular_c, MHz/sqrt(W/cm^2)
  double angular_c = 1.0;
  double rabi_mhz = 0.0;    // at the scan intensity
  bool two_level_ok = false;
};

/// One intermediate level of a two-photon Raman pathway.
struct RamanRecord {
  LevelId intermediate;
  double intermediate_binding_cm1 = 0.0; // relative to the intermediate's own asymptote
  double d1_au = 0.0;                    // |<intermediate|d|initial>|
  double d2_au = 0.0;                    // |<final|d|intermediate>|
  double product_au = 0.0;               // d1 * d2
  double detuning_mhz = 0.0;
  double linewidth_mhz = 0.0;
  std::complex<double> d_eff;            // MHz/(W/cm^2)
};

/// Signed radial integral of u_f(R) d(R) u_i(R) dR on the shared grid.
/// Throws std::invalid_argument when either state was solved on another grid.
double transition_dipole_signed(const BoundState& initial, const BoundState& final_state, const DipoleCurve& d,
                                const RadialGrid& grid);

/// |transition_dipole_signed|; the angular factor is applied by callers.
double transition_dipole(const BoundState& initial, const BoundState& final_state, const DipoleCurve& d,
                         const RadialGrid& grid);

/// <state| d^2 |state>, the completeness bound for sums of |<f|d|i>|^2.
double dipole_squared_expectation(const BoundState& state, const DipoleCurve& d, const RadialGrid& grid);

/// Omega = d_rabi * sqrt(I) in MHz. Throws std::invalid_argument for I < 0.
double rabi_frequency(double d_rabi, double intensity_wcm2);

/// True iff the Rabi frequency stays strictly below the trap frequency, so the
/// transition does not populate higher trap levels.
bool two_level_ok(double omega_rabi_mhz, double trap_freq_mhz);

/// C' d1 d2 / (Delta + i gamma / 2).
///
/// Throws std::invalid_argument when Delta == 0 and gamma == 0, or gamma < 0.
std::complex<double> raman_effective_dipole(double d1, double d2, double detuning_mhz, double linewidth_mhz,
                                            double angular_c = 1.0);

} // namespace mwassoc
