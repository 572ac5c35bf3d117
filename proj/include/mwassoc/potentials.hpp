#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

/**
 * @file potentials.hpp
 * @brief Diatomic potential curves, dipole curves and radial channels.
 *
 * A tabulated PotentialCurve is evaluated in three zones:
 *
 *   R < R_inner            repulsive wall  asymptote + A exp(-b R)
 *   R_inner <= R <= R_outer natural cubic spline through the table
 *   R > R_outer            asymptote - c6/R^6 - c8/R^8
 *
 * with R_inner / R_outer the first / last tabulated separations. The wall is
 * fitted through the two innermost points and blended into the spline over
 * the first interval; the spline is blended into the dispersion tail over the
 * last two intervals. Both blends use a cubic smoothstep, so the curve is C1
 * everywhere.
 *
 * All values are atomic units (bohr, hartree, e*a0).
 */

namespace mwassoc {

struct CurvePoint {
  double r;
  double value;
};

struct WallParams {
  double amplitude; // A, hartree
  double decay;     // b, 1/bohr
};

class PotentialCurve {
 public:
  enum class Form { morse, flat, tabulated };

  /// Flat curve at zero energy.
  PotentialCurve();

  /// Evaluate V(R). Throws std::invalid_argument for R <= 0.
  double operator()(double r) const;
  /// dV/dR, analytic per zone.
  double derivative(double r) const;

  Form form() const noexcept;
  const std::string& label() const noexcept;
  double asymptote() const noexcept;
  double c6() const noexcept;
  double c8() const noexcept;
  /// Tabulated points (empty for analytic forms).
  const std::vector<CurvePoint>& points() const noexcept;
  WallParams wall() const noexcept;
  /// (R_inner, R_outer); (0, 0) for analytic forms.
  std::pair<double, double> zone_bounds() const noexcept;
  /// Location and value of the minimum (asymptote for flat curves).
  std::pair<double, double> minimum() const noexcept;

  /// Copy with a different label.
  PotentialCurve relabeled(std::string label) const;

  struct Impl;

 private:
  explicit PotentialCurve(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend PotentialCurve make_morse(double, double, double, double);
  friend PotentialCurve make_flat(double);
  friend PotentialCurve make_tabulated(std::string, std::vector<CurvePoint>, double, double, double);
};

/// asymptote + De [(1 - exp(-a (R - Re)))^2 - 1]; analytic everywhere.
PotentialCurve make_morse(double depth, double r_eq, double range, double asymptote);

/// V(R) = asymptote for all R (a pure trap once the trap term is added).
PotentialCurve make_flat(double asymptote);

/// Build a stitched curve from points already in atomic units.
/// Throws std::invalid_argument on invariant violations.
PotentialCurve make_tabulated(std::string label, std::vector<CurvePoint> points, double asymptote,
                              double c6, double c8);

/// Parse the potential-file text format (see docs/file_formats.md).
PotentialCurve load_tabulated(std::string_view source);
PotentialCurve load_tabulated_file(const std::string& path);

double evaluate(const PotentialCurve& curve, double r);

enum class DipoleKind { permanent, transition };

/// R-dependent dipole function d(R) in e*a0.
///
/// Inside the table: natural cubic spline. Below the first point: constant
/// d(R_first). Beyond the last point: exponential decay to zero, continuous
/// at the boundary.
class DipoleCurve {
 public:
  double operator()(double r) const;

  DipoleKind kind() const noexcept;
  const std::pair<std::string, std::string>& couples() const noexcept;
  const std::vector<CurvePoint>& points() const noexcept;
  /// Decay length of the outer exponential tail.
  double tail_length() const noexcept;

  /// Same curve with every value multiplied by `factor`.
  DipoleCurve scaled(double factor) const;

  struct Impl;

 private:
  explicit DipoleCurve(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend DipoleCurve make_dipole(DipoleKind, std::pair<std::string, std::string>,
                                 std::vector<CurvePoint>);
};

DipoleCurve make_dipole(DipoleKind kind, std::pair<std::string, std::string> couples,
                        std::vector<CurvePoint> points);

/// Parse the dipole-file text format (see docs/file_formats.md).
DipoleCurve load_dipole(std::string_view source);
DipoleCurve load_dipole_file(const std::string& path);

double evaluate_dipole(const DipoleCurve& curve, double r);

/// One radial eigenproblem: curve + centrifugal term + isotropic harmonic trap.
struct ChannelSpec {
  double reduced_mass = 0.0; // electron masses
  int ell = 0;
  double trap_omega = 0.0; // angular frequency, atomic units; 0 = no trap
  PotentialCurve curve;

  /// Throws std::invalid_argument on mu <= 0, ell < 0 or trap_omega < 0.
  void check() const;
  /// sqrt(1 / (mu omega)); infinity without a trap.
  double trap_length() const;
};

/// V(R) + l(l+1)/(2 mu R^2) + mu omega^2 R^2 / 2.
double effective_potential(const ChannelSpec& channel, double r);

} // namespace mwassoc
