#pragma once

#include <string_view>

/**
 * @file units.hpp
 * @brief Physical constants and the unit conversions used throughout mwassoc.
 *
 * Everything inside the library works in atomic units (hartree, bohr,
 * electron mass, hbar = 1). User-facing values are cm^-1 for energies,
 * kHz/MHz for frequencies, W/cm^2 for intensities and MHz/sqrt(W/cm^2) for
 * dipole couplings. The constant values are CODATA 2018 and are mirrored in
 * docs/constants.txt.
 */

namespace mwassoc::units {

/// CODATA 2018 values. docs/constants.txt lists the same numbers; a test keeps them in sync.
struct PhysicalConstants {
  double cm1_per_hartree;        // hartree in cm^-1
  double hz_per_hartree;         // hartree in Hz
  double bohr_in_m;              // a0
  double ea0_in_Cm;              // atomic unit of electric dipole moment
  double planck_h;               // J s
  double eps0_c;                 // vacuum permittivity times c, A^2 s^4 / (kg m^3) * m/s
  double speed_of_light_cm_s;    // c in cm/s
  double amu_in_electron_masses; // unified atomic mass unit / m_e
  double bohr_per_angstrom;
};

inline constexpr PhysicalConstants codata2018{
    219474.6313632,
    6.579683920502e15,
    5.29177210903e-11,
    8.4783536255e-30,
    6.62607015e-34,
    8.8541878128e-12 * 299792458.0,
    2.99792458e10,
    1822.888486209,
    1.0 / 0.529177210903,
};

// Name/value pairs as listed in docs/constants.txt.
struct NamedConstant {
  std::string_view name;
  double value;
};

inline constexpr NamedConstant constant_table[] = {
    {"cm1_per_hartree", codata2018.cm1_per_hartree},
    {"hz_per_hartree", codata2018.hz_per_hartree},
    {"bohr_in_m", codata2018.bohr_in_m},
    {"ea0_in_Cm", codata2018.ea0_in_Cm},
    {"planck_h_Js", codata2018.planck_h},
    {"eps0_c_SI", codata2018.eps0_c},
    {"speed_of_light_cm_s", codata2018.speed_of_light_cm_s},
    {"amu_in_electron_masses", codata2018.amu_in_electron_masses},
    {"bohr_per_angstrom", codata2018.bohr_per_angstrom},
};

// All conversions throw std::invalid_argument on non-finite input.

double cm1_to_hartree(double cm1);
double hartree_to_cm1(double hartree);
double hz_to_cm1(double hz);
double cm1_to_hz(double cm1);
double hz_to_hartree(double hz);
double hartree_to_hz(double hartree);

/// Angular frequency in atomic units for a cyclic frequency in kHz.
double khz_to_angular_au(double khz);
double angular_au_to_khz(double omega);

double amu_to_electron_masses(double amu);
double angstrom_to_bohr(double angstrom);

/// Rabi coupling per sqrt(W/cm^2) for a dipole of `d_au` e*a0.
///
/// The Rabi frequency is taken as a cyclic frequency, Omega = d*E/h, with E
/// the field amplitude of a travelling wave of 1 W/cm^2,
/// E = sqrt(2 I / (eps0 c)). Result is in MHz/sqrt(W/cm^2).
double dipole_au_to_rabi_units(double d_au);

/// Inverse of dipole_au_to_rabi_units.
double rabi_units_to_dipole_au(double d_rabi);

} // namespace mwassoc::units
