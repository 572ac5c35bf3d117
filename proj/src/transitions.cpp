#include "mwassoc/transitions.hpp"

#include <cmath>
#include <stdexcept>

namespace mwassoc {

namespace {

void require_same_grid(const BoundState& s, const RadialGrid& grid) {
  if (s.psi.size() != grid.size() || s.grid_id != grid.id) {
    throw std::invalid_argument("state '" + s.label + "' v=" + std::to_string(s.v) +
                                " was not solved on the given grid");
  }
}

} // namespace

double transition_dipole_signed(const BoundState& initial, const BoundState& final_state, const DipoleCurve& d,
                                const RadialGrid& grid) {
  require_same_grid(initial, grid);
  require_same_grid(final_state, grid);
  double sum = 0.0;
  // (w d) * (u_i u_f): the product is symmetric in i and f bit for bit.
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    sum += (grid.weights[k] * d(grid.r[k])) * (initial.psi[k] * final_state.psi[k]);
  }
  return sum;
}

double transition_dipole(const BoundState& initial, const BoundState& final_state, const DipoleCurve& d,
                         const RadialGrid& grid) {
  return std::abs(transition_dipole_signed(initial, final_state, d, grid));
}

double dipole_squared_expectation(const BoundState& state, const DipoleCurve& d, const RadialGrid& grid) {
  require_same_grid(state, grid);
  double sum = 0.0;
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const double dk = d(grid.r[k]);
    sum += grid.weights[k] * dk * dk * state.psi[k] * state.psi[k];
  }
  return sum;
}

double rabi_frequency(double d_rabi, double intensity_wcm2) {
  if (!(intensity_wcm2 >= 0.0) || !std::isfinite(intensity_wcm2)) {
    throw std::invalid_argument("rabi_frequency: intensity must be finite and >= 0");
  }
  return d_rabi * std::sqrt(intensity_wcm2);
}

bool two_level_ok(double omega_rabi_mhz, double trap_freq_mhz) { return omega_rabi_mhz < trap_freq_mhz; }

std::complex<double> raman_effective_dipole(double d1, double d2, double detuning_mhz, double linewidth_mhz,
                                            double angular_c) {
  if (!(linewidth_mhz >= 0.0)) throw std::invalid_argument("raman_effective_dipole: linewidth must be >= 0");
  if (detuning_mhz == 0.0 && linewidth_mhz == 0.0) {
    throw std::invalid_argument("raman_effective_dipole: singular at zero detuning and zero linewidth");
  }
  return angular_c * d1 * d2 / std::complex<double>(detuning_mhz, 0.5 * linewidth_mhz);
}

} // namespace mwassoc
