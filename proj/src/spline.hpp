#pragma once

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

#include <memory>
#include <stdexcept>
#include <vector>

namespace mwassoc::detail {

/// Natural cubic spline backed by GSL's cspline. Evaluation never touches
/// shared mutable state (no accelerator), so concurrent reads are safe.
class NaturalSpline {
 public:
  NaturalSpline() = default;

  NaturalSpline(std::vector<double> x, std::vector<double> y)
      : data_(std::make_shared<Data>(std::move(x), std::move(y))) {}

  double operator()(double x) const { return gsl_interp_eval(data_->interp.get(), data_->x.data(), data_->y.data(), x, nullptr); }

  double derivative(double x) const {
    return gsl_interp_eval_deriv(data_->interp.get(), data_->x.data(), data_->y.data(), x, nullptr);
  }

 private:
  struct InterpDeleter {
    void operator()(gsl_interp* p) const { gsl_interp_free(p); }
  };

  struct Data {
    Data(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
      static const bool handler_off = [] {
        gsl_set_error_handler_off();
        return true;
      }();
      (void)handler_off;
      interp.reset(gsl_interp_alloc(gsl_interp_cspline, x.size()));
      if (!interp || gsl_interp_init(interp.get(), x.data(), y.data(), x.size()) != GSL_SUCCESS) {
        throw std::invalid_argument("spline construction failed (need >= 3 strictly increasing points)");
      }
    }
    std::vector<double> x;
    std::vector<double> y;
    std::unique_ptr<gsl_interp, InterpDeleter> interp;
  };

  std::shared_ptr<const Data> data_;
};

} // namespace mwassoc::detail
