#include "helpers.hpp"

#include "mwassoc/errors.hpp"
#include "mwassoc/potentials.hpp"
#include "mwassoc/units.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace mwassoc;
using testing::rel_err;

namespace {

const double De = units::cm1_to_hartree(250.0);
constexpr double Re = 11.0;
constexpr double alpha = 0.3;

std::string morse_file(int n, double r0, double r1, double c6 = 0.0) {
  const auto m = make_morse(De, Re, alpha, 0.0);
  std::ostringstream s;
  s.precision(17);
  s << "# exact Morse samples\nlabel=morse64\nunit_R=bohr\nunit_V=hartree\nasymptote=0\nc6=" << c6 << "\n";
  for (int i = 0; i < n; ++i) {
    const double r = r0 + (r1 - r0) * i / (n - 1);
    s << r << " " << m(r) << "\n";
  }
  return s.str();
}

// C1 at b: value and slope continuous, slope consistent with one-sided
// finite differences. V'' may jump at a boundary, so each side uses its own.
void check_c1(const PotentialCurve& v, double b) {
  const double eps = 1e-9 * b;
  const double h = 1e-4;
  const double curv_l = std::abs(v(b) - 2 * v(b - h) + v(b - 2 * h)) / (h * h);
  const double curv_r = std::abs(v(b + 2 * h) - 2 * v(b + h) + v(b)) / (h * h);
  const double slope = v.derivative(b);
  const double tol = 1e-6 * std::abs(slope) + 1e-12;
  const double jump = v(b + eps) - v(b - eps) - 2 * eps * slope;
  CHECK(std::abs(jump) <= 1e-12 * (std::abs(v(b)) + 1e-10));
  CHECK(std::abs(v.derivative(b + eps) - v.derivative(b - eps)) <= 2 * eps * std::max(curv_l, curv_r) * 1.5 + tol);
  const double left = (v(b) - v(b - h)) / h;
  const double right = (v(b + h) - v(b)) / h;
  CHECK(std::abs(left - slope) <= 0.75 * h * curv_l + tol);
  CHECK(std::abs(right - slope) <= 0.75 * h * curv_r + tol);
}

} // namespace

TEST_CASE("make_morse: minimum, dissociation and inflection values") {
  const double asym = 0.25;
  const auto m = make_morse(De, Re, alpha, asym);
  CHECK(m(Re) == doctest::Approx(asym - De).epsilon(1e-15));
  CHECK(std::abs(m(1e4) - asym) < 1e-18);
  // (1 - e^{-ln 2})^2 - 1 = 1/4 - 1 = -3/4.
  CHECK(rel_err(m(Re + std::numbers::ln2 / alpha) - asym, -0.75 * De) < 1e-12);
  CHECK(m.form() == PotentialCurve::Form::morse);
}

TEST_CASE("make_morse: non-positive parameters are rejected") {
  CHECK_THROWS_AS(make_morse(0.0, Re, alpha, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_morse(De, -1.0, alpha, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_morse(De, Re, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("evaluate: R <= 0 is rejected") {
  const auto m = make_morse(De, Re, alpha, 0.0);
  CHECK_THROWS_AS(evaluate(m, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(m, -2.0), std::invalid_argument);
}

TEST_CASE("load_tabulated: 64 exact Morse samples") {
  const auto m = make_morse(De, Re, alpha, 0.0);
  const int n = 64;
  const double r0 = 7.5, r1 = 25.0;
  const auto t = load_tabulated(morse_file(n, r0, r1));
  const auto& p = t.points();
  REQUIRE(p.size() == 64);

  SUBCASE("tabulated nodes reproduced to machine precision") {
    for (std::size_t i = 0; i + 2 < p.size(); ++i) CHECK(std::abs(t(p[i].r) - p[i].value) <= 4e-16 * De);
  }
  SUBCASE("interior midpoints within 1e-5 relative") {
    // The natural end condition on the steep wall costs accuracy in the first
    // few intervals; the last two intervals are the tail blend.
    for (int i = 6; i < n - 4; ++i) {
      const double r = 0.5 * (p[i].r + p[i + 1].r);
      CHECK(rel_err(t(r), m(r)) < 1e-5);
    }
    for (int i = 0; i < n - 3; ++i) {
      const double r = 0.5 * (p[i].r + p[i + 1].r);
      CHECK(std::abs(t(r) - m(r)) < 5e-3 * De);
    }
  }
}

TEST_CASE("load_tabulated: c6 = 0 gives a constant tail") {
  const auto t = load_tabulated(morse_file(40, 7.5, 25.0, 0.0));
  for (double r : {25.0, 30.0, 100.0, 1e4}) CHECK(t(r) == 0.0);
}

TEST_CASE("evaluate: dispersion tail beyond R_outer is exact") {
  const std::string text = "label=t\nunit_R=bohr\nunit_V=hartree\nasymptote=0.5\nc6=4300\nc8=4.9e5\n"
                           "5 0.9\n6 0.6\n7 0.45\n8 0.44\n9 0.46\n10 0.48\n11 0.49\n12 0.495\n";
  const auto t = load_tabulated(text);
  const auto [r_in, r_out] = t.zone_bounds();
  CHECK(r_in == 5.0);
  CHECK(r_out == 12.0);
  for (double r : {12.5, 20.0, 300.0}) {
    CHECK(t(r) == 0.5 - 4300 / std::pow(r, 6) - 4.9e5 / std::pow(r, 8));
  }
}

TEST_CASE("evaluate: wall below R_inner is A exp(-b R)") {
  const auto t = load_tabulated(morse_file(40, 7.5, 25.0));
  const auto w = t.wall();
  CHECK(w.amplitude > 0.0);
  CHECK(w.decay > 0.0);
  for (double r : {2.0, 5.0, 7.0, 7.49}) CHECK(rel_err(t(r), t.asymptote() + w.amplitude * std::exp(-w.decay * r)) < 1e-14);
  // Passes through the innermost point.
  CHECK(rel_err(t(7.5), t.points().front().value) < 1e-13);
}

TEST_CASE("property: stitched curves are C1 at the zone boundaries") {
  for (const char* model : {"krb_like", "rbcs_like"}) {
    for (const char* file : {"a3Sigma.pot", "X1Sigma.pot", "3_1.pot", "4_1.pot"}) {
      INFO(model << "/" << file);
      const auto v = load_tabulated_file(testing::model_path(model, file));
      const auto& p = v.points();
      for (double b : {p[0].r, p[1].r, p[p.size() - 3].r, p.back().r}) check_c1(v, b);
    }
  }
  const auto t = load_tabulated(morse_file(64, 7.5, 25.0, 4300.0));
  const auto& p = t.points();
  for (double b : {p[0].r, p[1].r, p[p.size() - 3].r, p.back().r}) check_c1(t, b);
}

TEST_CASE("evaluate: continuity at R_outer as epsilon -> 0") {
  const auto v = load_tabulated_file(testing::model_path("krb_like", "a3Sigma.pot"));
  const double b = v.zone_bounds().second;
  double prev = INFINITY;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double jump = std::abs(v(b - eps) - v(b + eps));
    CHECK(jump < prev);
    prev = jump;
  }
  CHECK(prev < 1e-14);
}

TEST_CASE("load_tabulated: malformed input") {
  const std::string head = "label=x\nunit_R=bohr\nunit_V=hartree\nasymptote=0\nc6=1\n";
  std::string rows;
  for (int i = 0; i < 8; ++i) rows += std::to_string(5 + i) + " " + std::to_string(1.0 / (1 + i)) + "\n";

  SUBCASE("duplicated R") {
    const std::string dup = head + "5 1\n" + rows;
    try {
      load_tabulated(dup);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 7);
    }
  }
  SUBCASE("unsorted R") {
    CHECK_THROWS_AS(load_tabulated(head + "9 1\n8 2\n" + rows), ParseError);
  }
  SUBCASE("fewer than 8 points") {
    std::string few;
    for (int i = 0; i < 7; ++i) few += std::to_string(5 + i) + " " + std::to_string(1.0 / (1 + i)) + "\n";
    CHECK_THROWS_AS(load_tabulated(head + few), ParseError);
  }
  SUBCASE("missing c6") {
    CHECK_THROWS_WITH_AS(load_tabulated("label=x\nunit_R=bohr\nunit_V=hartree\nasymptote=0\n" + rows),
                         doctest::Contains("c6"), ParseError);
  }
  SUBCASE("negative c6 names the field") {
    CHECK_THROWS_WITH_AS(load_tabulated("label=x\nunit_R=bohr\nunit_V=hartree\nasymptote=0\nc6=-1\n" + rows),
                         doctest::Contains("c6"), ParseError);
  }
  SUBCASE("bad number carries its line") {
    try {
      load_tabulated(head + "5 1\n6 zero\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 7);
      CHECK(std::string(e.what()).find("line 7") != std::string::npos);
    }
  }
  SUBCASE("unknown header") {
    CHECK_THROWS_AS(load_tabulated("colour=red\n" + head + rows), ParseError);
  }
}

TEST_CASE("load_tabulated: angstrom and cm^-1 units") {
  std::string text = "label=u\nunit_R=angstrom\nunit_V=cm-1\nasymptote=100\nc6=0\n";
  for (int i = 0; i < 10; ++i) text += std::to_string(3 + i) + " " + std::to_string(400.0 - 30 * i) + "\n";
  const auto t = load_tabulated(text);
  CHECK(rel_err(t.points()[0].r, 3.0 * units::codata2018.bohr_per_angstrom) < 1e-15);
  CHECK(rel_err(t.points()[0].value, units::cm1_to_hartree(400.0)) < 1e-15);
  CHECK(rel_err(t.asymptote(), units::cm1_to_hartree(100.0)) < 1e-15);
}

TEST_CASE("effective_potential") {
  const auto m = make_morse(De, Re, alpha, 0.0);
  const double mu = 1000.0;
  SUBCASE("l=0 without trap is the bare curve") {
    const ChannelSpec c{mu, 0, 0.0, m};
    for (double r : {5.0, 11.0, 40.0}) CHECK(effective_potential(c, r) == m(r));
  }
  SUBCASE("flat curve with trap is harmonic") {
    const double w = 3e-11;
    const ChannelSpec c{mu, 0, w, make_flat(0.0)};
    for (double r : {1.0, 100.0, 1000.0}) CHECK(rel_err(effective_potential(c, r), 0.5 * mu * w * w * r * r) < 1e-15);
  }
  SUBCASE("l=1 adds 1/(mu R^2)") {
    const ChannelSpec c0{mu, 0, 0.0, m}, c1{mu, 1, 0.0, m};
    CHECK(rel_err(effective_potential(c1, 1.0) - effective_potential(c0, 1.0), 1.0 / mu) < 1e-12);
  }
  SUBCASE("trap makes the potential diverge") {
    const ChannelSpec c{mu, 1, 3e-11, m};
    // Past the centrifugal region the trap term takes over.
    double prev = effective_potential(c, 1e4);
    for (double r : {1e5, 1e6, 1e7}) {
      const double v = effective_potential(c, r);
      CHECK(v > prev);
      prev = v;
    }
  }
  SUBCASE("invalid channel") {
    CHECK_THROWS_AS((ChannelSpec{-1.0, 0, 0.0, m}.check()), std::invalid_argument);
    CHECK_THROWS_AS((ChannelSpec{mu, -1, 0.0, m}.check()), std::invalid_argument);
    CHECK_THROWS_AS((ChannelSpec{mu, 0, -1.0, m}.check()), std::invalid_argument);
  }
}

TEST_CASE("dipole curves") {
  SUBCASE("constant table") {
    const auto d = load_dipole("kind=permanent\ncouples=a3Sigma\nunit_R=bohr\nunit_d=au\n4 0.3\n6 0.3\n8 0.3\n10 0.3\n12 0.3\n");
    for (double r : {4.0, 5.1, 7.7, 11.9}) CHECK(d(r) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(d.couples().first == "a3Sigma");
    CHECK(d.couples().second == "a3Sigma");
  }
  SUBCASE("bundled dipoles: nodes, extrapolation, continuity") {
    for (const char* file : {"a3Sigma.dip", "X1Sigma.dip", "3_1_a.dip", "3_1_X.dip", "4_1_a.dip", "4_1_X.dip"}) {
      INFO(file);
      const auto d = load_dipole_file(testing::model_path("krb_like", file));
      const auto& p = d.points();
      for (const auto& pt : p) CHECK(evaluate_dipole(d, pt.r) == doctest::Approx(pt.value).epsilon(1e-14));
      // Short range: constant.
      CHECK(d(0.5 * p.front().r) == p.front().value);
      // Long range: monotone decay toward zero, continuous at the last point.
      const double last = p.back().r;
      CHECK(std::abs(d(last * (1 + 1e-12)) - d(last)) <= 1e-9 * std::abs(d(last)) + 1e-18);
      double prev = std::abs(d(last));
      for (double r = last + 5; r < last + 200; r += 5) {
        CHECK(std::abs(d(r)) <= prev);
        prev = std::abs(d(r));
      }
      CHECK(std::abs(d(last + 1e4)) < 1e-12);
    }
  }
  SUBCASE("debye units") {
    const auto d = load_dipole("kind=permanent\ncouples=X\nunit_R=bohr\nunit_d=debye\n4 1\n6 1\n8 1\n10 1\n");
    CHECK(rel_err(d(5.0), 0.3934303) < 1e-6);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(load_dipole("kind=permanent\ncouples=X\nunit_R=bohr\n4 1\n6 1\n8 1\n"), ParseError);
    CHECK_THROWS_AS(load_dipole("kind=other\ncouples=X\nunit_R=bohr\n4 1\n6 1\n8 1\n10 1\n"), ParseError);
    const auto d = load_dipole("kind=transition\ncouples=a,b\nunit_R=bohr\n4 1\n6 1\n8 1\n10 1\n");
    CHECK_THROWS_AS(evaluate_dipole(d, 0.0), std::invalid_argument);
  }
  SUBCASE("scaled") {
    const auto d = load_dipole_file(testing::model_path("krb_like", "a3Sigma.dip"));
    const auto d2 = d.scaled(2.0);
    for (double r : {3.0, 10.0, 14.0, 55.0}) CHECK(d2(r) == 2.0 * d(r));
  }
}
