#include "mwassoc/units.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mwassoc::units {

namespace {

const PhysicalConstants& k = codata2018;

double checked(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + ": input must be finite");
  }
  return x;
}

// MHz of Rabi frequency per e*a0 of dipole at 1 W/cm^2.
double rabi_mhz_per_au() {
  const double intensity_si = 1.0e4; // 1 W/cm^2 in W/m^2
  const double field = std::sqrt(2.0 * intensity_si / k.eps0_c);
  return k.ea0_in_Cm * field / k.planck_h * 1.0e-6;
}

} // namespace

double cm1_to_hartree(double cm1) { return checked(cm1, "cm1_to_hartree") / k.cm1_per_hartree; }

double hartree_to_cm1(double hartree) { return checked(hartree, "hartree_to_cm1") * k.cm1_per_hartree; }

double hz_to_cm1(double hz) { return checked(hz, "hz_to_cm1") / k.speed_of_light_cm_s; }

double cm1_to_hz(double cm1) { return checked(cm1, "cm1_to_hz") * k.speed_of_light_cm_s; }

double hz_to_hartree(double hz) { return checked(hz, "hz_to_hartree") / k.hz_per_hartree; }

double hartree_to_hz(double hartree) { return checked(hartree, "hartree_to_hz") * k.hz_per_hartree; }

double khz_to_angular_au(double khz) {
  // hbar omega = h nu, and the atomic unit of energy is one hartree.
  return checked(khz, "khz_to_angular_au") * 1.0e3 / k.hz_per_hartree;
}

double angular_au_to_khz(double omega) {
  return checked(omega, "angular_au_to_khz") * k.hz_per_hartree / 1.0e3;
}

double amu_to_electron_masses(double amu) {
  return checked(amu, "amu_to_electron_masses") * k.amu_in_electron_masses;
}

double angstrom_to_bohr(double angstrom) {
  return checked(angstrom, "angstrom_to_bohr") * k.bohr_per_angstrom;
}

double dipole_au_to_rabi_units(double d_au) {
  return checked(d_au, "dipole_au_to_rabi_units") * rabi_mhz_per_au();
}

double rabi_units_to_dipole_au(double d_rabi) {
  return checked(d_rabi, "rabi_units_to_dipole_au") / rabi_mhz_per_au();
}

} // namespace mwassoc::units
