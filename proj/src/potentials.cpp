#include "mwassoc/potentials.hpp"

#include "spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mwassoc {

namespace {

void require_positive_r(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("separation R must be positive and finite, got " + std::to_string(r));
  }
}

// Cubic smoothstep on [0, 1] and its derivative.
double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }
double smoothstep_slope(double t) { return 6.0 * t * (1.0 - t); }

} // namespace

struct PotentialCurve::Impl {
  Form form = Form::flat;
  std::string label;
  double asymptote = 0.0;
  double c6 = 0.0;
  double c8 = 0.0;

  // morse
  double depth = 0.0;
  double r_eq = 0.0;
  double range = 0.0;

  // tabulated
  std::vector<CurvePoint> points;
  WallParams wall{0.0, 0.0};
  detail::NaturalSpline spline;

  double tail(double r) const {
    const double r2 = r * r;
    const double r6 = r2 * r2 * r2;
    return asymptote - c6 / r6 - c8 / (r6 * r2);
  }
  double tail_slope(double r) const {
    const double r2 = r * r;
    const double r7 = r2 * r2 * r2 * r;
    return 6.0 * c6 / r7 + 8.0 * c8 / (r7 * r2);
  }
  double wall_value(double r) const { return asymptote + wall.amplitude * std::exp(-wall.decay * r); }
  double wall_slope(double r) const { return -wall.decay * wall.amplitude * std::exp(-wall.decay * r); }

  double value(double r) const {
    switch (form) {
      case Form::flat:
        return asymptote;
      case Form::morse: {
        const double e = 1.0 - std::exp(-range * (r - r_eq));
        return asymptote + depth * (e * e - 1.0);
      }
      case Form::tabulated:
        break;
    }
    const std::size_t n = points.size();
    const double r_in = points.front().r;
    const double r_in2 = points[1].r;
    const double r_blend = points[n - 3].r;
    const double r_out = points.back().r;
    if (r < r_in) return wall_value(r);
    if (r > r_out) return tail(r);
    if (r < r_in2) {
      const double s = smoothstep((r - r_in) / (r_in2 - r_in));
      return (1.0 - s) * wall_value(r) + s * spline(r);
    }
    if (r > r_blend) {
      const double s = smoothstep((r - r_blend) / (r_out - r_blend));
      return (1.0 - s) * spline(r) + s * tail(r);
    }
    return spline(r);
  }

  double slope(double r) const {
    switch (form) {
      case Form::flat:
        return 0.0;
      case Form::morse: {
        const double x = std::exp(-range * (r - r_eq));
        return 2.0 * depth * range * (1.0 - x) * x;
      }
      case Form::tabulated:
        break;
    }
    const std::size_t n = points.size();
    const double r_in = points.front().r;
    const double r_in2 = points[1].r;
    const double r_blend = points[n - 3].r;
    const double r_out = points.back().r;
    if (r < r_in) return wall_slope(r);
    if (r > r_out) return tail_slope(r);
    if (r < r_in2) {
      const double h = r_in2 - r_in;
      const double t = (r - r_in) / h;
      const double s = smoothstep(t);
      return (1.0 - s) * wall_slope(r) + s * spline.derivative(r) +
             smoothstep_slope(t) / h * (spline(r) - wall_value(r));
    }
    if (r > r_blend) {
      const double h = r_out - r_blend;
      const double t = (r - r_blend) / h;
      const double s = smoothstep(t);
      return (1.0 - s) * spline.derivative(r) + s * tail_slope(r) +
             smoothstep_slope(t) / h * (tail(r) - spline(r));
    }
    return spline.derivative(r);
  }
};

PotentialCurve::PotentialCurve() : PotentialCurve(make_flat(0.0)) {}

double PotentialCurve::operator()(double r) const {
  require_positive_r(r);
  return impl_->value(r);
}

double PotentialCurve::derivative(double r) const {
  require_positive_r(r);
  return impl_->slope(r);
}

PotentialCurve::Form PotentialCurve::form() const noexcept { return impl_->form; }
const std::string& PotentialCurve::label() const noexcept { return impl_->label; }
double PotentialCurve::asymptote() const noexcept { return impl_->asymptote; }
double PotentialCurve::c6() const noexcept { return impl_->c6; }
double PotentialCurve::c8() const noexcept { return impl_->c8; }
const std::vector<CurvePoint>& PotentialCurve::points() const noexcept { return impl_->points; }
WallParams PotentialCurve::wall() const noexcept { return impl_->wall; }

std::pair<double, double> PotentialCurve::zone_bounds() const noexcept {
  if (impl_->form != Form::tabulated) return {0.0, 0.0};
  return {impl_->points.front().r, impl_->points.back().r};
}

std::pair<double, double> PotentialCurve::minimum() const noexcept {
  switch (impl_->form) {
    case Form::flat:
      return {0.0, impl_->asymptote};
    case Form::morse:
      return {impl_->r_eq, impl_->asymptote - impl_->depth};
    case Form::tabulated:
      break;
  }
  const auto it = std::min_element(impl_->points.begin(), impl_->points.end(),
                                   [](const CurvePoint& a, const CurvePoint& b) { return a.value < b.value; });
  // Refine on a fine sampling around the tabulated minimum.
  const std::size_t i = static_cast<std::size_t>(it - impl_->points.begin());
  const double lo = impl_->points[i == 0 ? 0 : i - 1].r;
  const double hi = impl_->points[std::min(i + 1, impl_->points.size() - 1)].r;
  double best_r = it->r;
  double best_v = impl_->value(best_r);
  constexpr int samples = 400;
  for (int k = 0; k <= samples; ++k) {
    const double r = lo + (hi - lo) * k / samples;
    const double v = impl_->value(r);
    if (v < best_v) {
      best_v = v;
      best_r = r;
    }
  }
  return {best_r, best_v};
}

PotentialCurve PotentialCurve::relabeled(std::string label) const {
  auto copy = std::make_shared<Impl>(*impl_);
  copy->label = std::move(label);
  return PotentialCurve(std::move(copy));
}

PotentialCurve make_morse(double depth, double r_eq, double range, double asymptote) {
  if (!(depth > 0.0) || !(r_eq > 0.0) || !(range > 0.0)) {
    throw std::invalid_argument("make_morse: De, Re and a must all be positive");
  }
  if (!std::isfinite(asymptote) || !std::isfinite(depth) || !std::isfinite(r_eq) || !std::isfinite(range)) {
    throw std::invalid_argument("make_morse: parameters must be finite");
  }
  auto impl = std::make_shared<PotentialCurve::Impl>();
  impl->form = PotentialCurve::Form::morse;
  impl->label = "morse";
  impl->asymptote = asymptote;
  impl->depth = depth;
  impl->r_eq = r_eq;
  impl->range = range;
  return PotentialCurve(std::move(impl));
}

PotentialCurve make_flat(double asymptote) {
  if (!std::isfinite(asymptote)) throw std::invalid_argument("make_flat: asymptote must be finite");
  auto impl = std::make_shared<PotentialCurve::Impl>();
  impl->form = PotentialCurve::Form::flat;
  impl->label = "flat";
  impl->asymptote = asymptote;
  return PotentialCurve(std::move(impl));
}

PotentialCurve make_tabulated(std::string label, std::vector<CurvePoint> points, double asymptote, double c6,
                              double c8) {
  if (points.size() < 8) {
    throw std::invalid_argument("potential table needs at least 8 points, got " + std::to_string(points.size()));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].r) || !std::isfinite(points[i].value)) {
      throw std::invalid_argument("potential table entry " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(points[i].r > points[i - 1].r)) {
      throw std::invalid_argument("potential table R values must be strictly increasing (entry " +
                                  std::to_string(i) + ")");
    }
  }
  if (!(points.front().r > 0.0)) throw std::invalid_argument("potential table R values must be positive");
  if (!(c6 >= 0.0) || !std::isfinite(c6)) throw std::invalid_argument("c6 must be finite and >= 0");
  if (!(c8 >= 0.0) || !std::isfinite(c8)) throw std::invalid_argument("c8 must be finite and >= 0");

  const double e0 = points[0].value - asymptote;
  const double e1 = points[1].value - asymptote;
  if (!(e0 > e1 && e1 > 0.0)) {
    throw std::invalid_argument(
        "the two innermost points must lie on the repulsive wall (above the asymptote and decreasing)");
  }

  auto impl = std::make_shared<PotentialCurve::Impl>();
  impl->form = PotentialCurve::Form::tabulated;
  impl->label = std::move(label);
  impl->asymptote = asymptote;
  impl->c6 = c6;
  impl->c8 = c8;
  const double b = std::log(e0 / e1) / (points[1].r - points[0].r);
  impl->wall = {e0 * std::exp(b * points[0].r), b};

  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& p : points) {
    xs.push_back(p.r);
    ys.push_back(p.value);
  }
  impl->spline = detail::NaturalSpline(std::move(xs), std::move(ys));
  impl->points = std::move(points);
  return PotentialCurve(std::move(impl));
}

double evaluate(const PotentialCurve& curve, double r) { return curve(r); }

// ---------------------------------------------------------------------------

struct DipoleCurve::Impl {
  DipoleKind kind = DipoleKind::permanent;
  std::pair<std::string, std::string> couples;
  std::vector<CurvePoint> points;
  detail::NaturalSpline spline;
  double tail_length = 1.0;

  double value(double r) const {
    if (r <= points.front().r) return points.front().value;
    if (r >= points.back().r) {
      return points.back().value * std::exp(-(r - points.back().r) / tail_length);
    }
    return spline(r);
  }
};

double DipoleCurve::operator()(double r) const {
  require_positive_r(r);
  return impl_->value(r);
}

DipoleKind DipoleCurve::kind() const noexcept { return impl_->kind; }
const std::pair<std::string, std::string>& DipoleCurve::couples() const noexcept { return impl_->couples; }
const std::vector<CurvePoint>& DipoleCurve::points() const noexcept { return impl_->points; }
double DipoleCurve::tail_length() const noexcept { return impl_->tail_length; }

DipoleCurve DipoleCurve::scaled(double factor) const {
  auto pts = impl_->points;
  for (auto& p : pts) p.value *= factor;
  return make_dipole(impl_->kind, impl_->couples, std::move(pts));
}

DipoleCurve make_dipole(DipoleKind kind, std::pair<std::string, std::string> couples,
                        std::vector<CurvePoint> points) {
  if (points.size() < 4) {
    throw std::invalid_argument("dipole table needs at least 4 points, got " + std::to_string(points.size()));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].r) || !std::isfinite(points[i].value)) {
      throw std::invalid_argument("dipole table entry " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(points[i].r > points[i - 1].r)) {
      throw std::invalid_argument("dipole table R values must be strictly increasing (entry " +
                                  std::to_string(i) + ")");
    }
  }
  if (!(points.front().r > 0.0)) throw std::invalid_argument("dipole table R values must be positive");

  auto impl = std::make_shared<DipoleCurve::Impl>();
  impl->kind = kind;
  impl->couples = std::move(couples);
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    xs.push_back(p.r);
    ys.push_back(p.value);
  }
  impl->spline = detail::NaturalSpline(std::move(xs), std::move(ys));

  // Match the spline slope at the last point when it already heads towards
  // zero; otherwise fall back to the last interval width.
  const double r_last = points.back().r;
  const double d_last = points.back().value;
  const double slope = impl->spline.derivative(r_last);
  double length = r_last - points[points.size() - 2].r;
  if (d_last * slope < 0.0) length = std::min(-d_last / slope, r_last);
  impl->tail_length = length;
  impl->points = std::move(points);
  return DipoleCurve(std::move(impl));
}

double evaluate_dipole(const DipoleCurve& curve, double r) { return curve(r); }

// ---------------------------------------------------------------------------

void ChannelSpec::check() const {
  if (!(reduced_mass > 0.0) || !std::isfinite(reduced_mass)) {
    throw std::invalid_argument("channel reduced mass must be positive");
  }
  if (ell < 0) throw std::invalid_argument("channel partial wave must be non-negative");
  if (!(trap_omega >= 0.0) || !std::isfinite(trap_omega)) {
    throw std::invalid_argument("channel trap frequency must be non-negative");
  }
}

double ChannelSpec::trap_length() const {
  if (trap_omega <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(1.0 / (reduced_mass * trap_omega));
}

double effective_potential(const ChannelSpec& channel, double r) {
  const double v = channel.curve(r);
  const double l = channel.ell;
  const double mu = channel.reduced_mass;
  const double w = channel.trap_omega;
  return v + l * (l + 1.0) / (2.0 * mu * r * r) + 0.5 * mu * w * w * r * r;
}

} // namespace mwassoc
