#pragma once

#include <cstdint>
#include <functional>
#include <limits>

namespace glstail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Outcome of one adaptive quadrature call.
struct IntegralResult {
  double value = 0.0;
  double abs_error = 0.0;      // estimated absolute error of `value`
  bool converged = false;      // abs_error met the requested tolerance
  std::int64_t evaluations = 0;
};

// Outcome of a one-dimensional maximization over an open interval.
struct MaxResult {
  double argmax = 0.0;
  double max_value = 0.0;      // +inf when the supremum is unbounded
  bool attained_interior = false;
};

// Gamma(x), x > 0.  Returns +inf past the double overflow threshold.
double gamma(double x);

// ln Gamma(x), x > 0.
double log_gamma(double x);

struct IntegrateOptions {
  double tol = 1e-10;                      // absolute error target
  std::int64_t max_evaluations = 1000000;  // hard budget per call
};

// Adaptive Gauss-Kronrod quadrature over (lower, upper); `upper` may be
// +inf, in which case the interval is mapped through u = lower + s/(1-s)
// and refined adaptively near s = 1.  All rule nodes are interior, so
// integrable endpoint singularities are admissible and the endpoints are
// never evaluated.  NaN from the integrand throws; an infinite panel value
// marks the integral as diverged (value +-inf, converged = false).
IntegralResult integrate(const std::function<double(double)>& f,
                         double lower, double upper,
                         const IntegrateOptions& opt);
IntegralResult integrate(const std::function<double(double)>& f,
                         double lower, double upper, double tol);

struct MaximizeOptions {
  double tol = 1e-8;           // relative argmax tolerance
  int scan_points = 512;       // coarse scan resolution
  double expansion_cap = 1e6;  // geometric expansion stops here
};

// Coarse grid scan followed by golden-section refinement over the open
// interval (lower, upper); `upper` may be +inf.  Finite endpoints are
// approached no closer than 1e-9 of the span.  -inf objective values are
// treated as excluded points; NaN throws.  If the values still improve at
// the expansion cap the supremum is reported as +inf.
MaxResult maximize_1d(const std::function<double(double)>& h,
                      double lower, double upper,
                      const MaximizeOptions& opt);
MaxResult maximize_1d(const std::function<double(double)>& h,
                      double lower, double upper, double tol);

}  // namespace glstail
