#include "helpers.hpp"

#include "mwassoc/units.hpp"

#include <doctest.h>

#include <charconv>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

using namespace mwassoc::units;
using testing::rel_err;

// Oracle values below were computed by hand from the CODATA 2018 constants
// before the conversions were written.

TEST_CASE("cm^-1 to hartree") {
  CHECK(cm1_to_hartree(0.0) == 0.0);
  CHECK(cm1_to_hartree(219474.6313632) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel_err(cm1_to_hartree(-1.5), -6.834502879367906e-06) < 1e-9);
}

TEST_CASE("Hz to cm^-1") {
  CHECK(hz_to_cm1(0.0) == 0.0);
  CHECK(rel_err(hz_to_cm1(2.0e5), 6.671281903963041e-06) < 1e-6);
  CHECK(rel_err(hz_to_cm1(2.99792458e10), 1.0) < 1e-14);
  CHECK(rel_err(hz_to_cm1(1.0), 3.335640951e-11) < 1e-9);
}

TEST_CASE("dipole to Rabi units") {
  CHECK(dipole_au_to_rabi_units(0.0) == 0.0);
  // e a0 E1 / h with E1 = sqrt(2 * 1e4 W/m^2 / (eps0 c)).
  CHECK(rel_err(dipole_au_to_rabi_units(1.0), 35.12252891292623) < 1e-10);
  const double d = 0.37;
  CHECK(dipole_au_to_rabi_units(2.0 * d) == 2.0 * dipole_au_to_rabi_units(d));
}

TEST_CASE("trap frequency in atomic units") {
  // hbar omega = h nu: omega_au = nu / (Hz per hartree).
  CHECK(rel_err(khz_to_angular_au(200.0), 3.039659692113917e-11) < 1e-12);
  CHECK(rel_err(hz_to_cm1(200e3) * 1.5, 1.0006922855944561e-05) < 1e-12);
}

TEST_CASE("composition: Hz -> cm^-1 -> hartree equals Hz -> hartree") {
  for (double x : {1.0, 2e5, 3.7e9, 6.579683920502e15}) {
    CHECK(rel_err(cm1_to_hartree(hz_to_cm1(x)), hz_to_hartree(x)) < 1e-12);
  }
}

TEST_CASE("property: round trips agree to 1e-12") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-12, 12);
  for (int i = 0; i < 2000; ++i) {
    const double x = mant(rng) * std::pow(10.0, expo(rng));
    if (x == 0.0) continue;
    CHECK(rel_err(hartree_to_cm1(cm1_to_hartree(x)), x) < 1e-12);
    CHECK(rel_err(cm1_to_hz(hz_to_cm1(x)), x) < 1e-12);
    CHECK(rel_err(hartree_to_hz(hz_to_hartree(x)), x) < 1e-12);
    CHECK(rel_err(angular_au_to_khz(khz_to_angular_au(x)), x) < 1e-12);
    CHECK(rel_err(rabi_units_to_dipole_au(dipole_au_to_rabi_units(x)), x) < 1e-12);
  }
}

TEST_CASE("property: conversions are linear to 1e-14") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const double x = u(rng), a = u(rng);
    if (x == 0.0 || a == 0.0) continue;
    CHECK(rel_err(cm1_to_hartree(a * x), a * cm1_to_hartree(x)) < 1e-14);
    CHECK(rel_err(hz_to_cm1(a * x), a * hz_to_cm1(x)) < 1e-14);
    CHECK(rel_err(dipole_au_to_rabi_units(a * x), a * dipole_au_to_rabi_units(x)) < 1e-14);
  }
}

TEST_CASE("non-finite input is rejected") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cm1_to_hartree(nan), std::invalid_argument);
  CHECK_THROWS_AS(hz_to_cm1(inf), std::invalid_argument);
  CHECK_THROWS_AS(dipole_au_to_rabi_units(-inf), std::invalid_argument);
  CHECK_THROWS_AS(khz_to_angular_au(nan), std::invalid_argument);
}

TEST_CASE("docs/constants.txt matches the constants table") {
  std::istringstream in(testing::slurp(testing::source_dir + "/docs/constants.txt"));
  std::map<std::string, std::string> doc;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    doc[line.substr(0, eq)] = line.substr(eq + 1);
  }
  CHECK(doc.size() == std::size(constant_table));
  for (const auto& c : constant_table) {
    const std::string name(c.name);
    INFO(name);
    REQUIRE(doc.contains(name));
    const std::string& text = doc[name];
    double v = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), v);
    CHECK(v == c.value);
    std::size_t digits = 0;
    for (char ch : text.substr(0, text.find_first_of("eE"))) digits += (ch >= '0' && ch <= '9');
    CHECK(digits >= 10);
  }
}
