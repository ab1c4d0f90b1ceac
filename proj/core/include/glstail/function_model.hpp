#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "glstail/numerics.hpp"

namespace glstail {

// ---------------------------------------------------------------------------
// Measurable-function specifications.
// Each family carries an intrinsic open domain; functions vanish outside it.
// ---------------------------------------------------------------------------

// f(x) = exp(-c x^theta) on (0, +inf).
struct StretchedExp {
  double c = 1.0;
  double theta = 1.0;
};

// f(x) = |ln|x|| on (-1, 0); unbounded near 0, vanishes toward -1.
struct LogSingular {};

// f(y) = exp(-y) on (0, +inf).
struct TruncatedExp {};

class FunctionSpec;

// The inner function restricted to (0, 1); zero elsewhere.
struct Indicator01Scaled {
  std::shared_ptr<const FunctionSpec> inner;
};

// Union of pieces supported on pairwise-disjoint domains.
struct DisjointUnion {
  std::vector<FunctionSpec> parts;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

class FunctionSpec {
 public:
  using Variant = std::variant<StretchedExp, LogSingular, TruncatedExp,
                               Indicator01Scaled, DisjointUnion>;

  FunctionSpec(StretchedExp v);       // requires c > 0, theta > 0
  FunctionSpec(LogSingular v);
  FunctionSpec(TruncatedExp v);
  FunctionSpec(Indicator01Scaled v);  // inner must live on (0, +inf)
  FunctionSpec(DisjointUnion v);      // parts' domains must be disjoint

  const Variant& node() const { return v_; }

  // Open intervals carrying the function, sorted by left endpoint.
  std::vector<Interval> domain() const;

 private:
  Variant v_;
};

// f(x); zero outside the domain.
double eval_function(const FunctionSpec& spec, double x);

// ---------------------------------------------------------------------------
// Tail functions T(t) = mu{ |f| > t }, defined for t > 0.
// T may blow up as t -> 0+ on infinite-measure domains.
// ---------------------------------------------------------------------------

// T(t) = exp(-C t^m).
struct StretchedExpTail {
  double C = 1.0;
  double m = 1.0;
};

// T(t) = coeff * (ln(cutoff/t))^{1/theta} on (0, cutoff), zero beyond.
struct LogPowerTail {
  double theta = 1.0;
  double coeff = 1.0;
  double cutoff = 1.0;
};

// Sampled tail: strictly increasing t, nonincreasing T >= 0, at least two
// rows.  Interpolation is log-linear in T where both segment endpoints are
// positive and linear otherwise; left of the grid the first value is held
// (reported as extrapolated); right of the grid the tail is zero.
struct TabulatedTail {
  std::vector<std::pair<double, double>> grid;
};

class TailFunction;

// Tail of a disjoint union: the sum of the part tails.
struct PiecewiseSumTail {
  std::vector<TailFunction> parts;
};

class TailFunction {
 public:
  using Variant = std::variant<StretchedExpTail, LogPowerTail, TabulatedTail,
                               PiecewiseSumTail>;

  TailFunction(StretchedExpTail v);  // requires C > 0, m > 0
  TailFunction(LogPowerTail v);      // requires theta > 0, coeff > 0, cutoff > 0
  TailFunction(TabulatedTail v);
  TailFunction(PiecewiseSumTail v);  // requires at least one part

  const Variant& node() const { return v_; }

 private:
  Variant v_;
};

// T(t) for t > 0.  *extrapolated (when non-null) is set to true if a
// tabulated tail answered left of its grid.
double eval_tail(const TailFunction& tail, double t,
                 bool* extrapolated = nullptr);

// ln T(t), computed without forming T when the closed form would
// underflow (stretched-exponential tails at large t).  -inf where T = 0.
double tail_log(const TailFunction& tail, double t);

// Exact tail of a specification.  Indicator01Scaled is rejected: its tail
// min(1, T_inner) leaves every representable family.
TailFunction tail_of(const FunctionSpec& spec);

// Tail of lambda * f given the tail of f:  t -> T(t / lambda).
TailFunction scale_tail(const TailFunction& tail, double lambda);

// Points where T or its derivative jumps; integration split points.
std::vector<double> tail_breakpoints(const TailFunction& tail);

// Smallest t0 with T == 0 on [t0, +inf); +inf if T stays positive.
double tail_support_end(const TailFunction& tail);

// -dT/dt (nonnegative a.e.); tabulated tails use the interpolant's slope.
double tail_neg_derivative(const TailFunction& tail, double t);

// ln(-dT/dt); -inf where the derivative vanishes.  Stable against the
// underflow of the two factors separately.
double tail_log_neg_derivative(const TailFunction& tail, double t);

// ---------------------------------------------------------------------------
// Generating functions psi(p) with support (lo, hi); the formal extension
// outside the support is +inf.
// ---------------------------------------------------------------------------

// psi(p) = C1 * p^{1/m}.
struct PowerPsi {
  double C1 = 1.0;
  double m = 1.0;
};

// psi(p) = || exp(-c x^theta) ||_p, in closed form.
struct NaturalStretchedExpPsi {
  double c = 1.0;
  double theta = 1.0;
};

// Sampled psi: strictly increasing p > 0, psi > 0, at least two rows.
// Log-log interpolation between nodes; support is the closed node range.
struct TabulatedPsi {
  std::vector<std::pair<double, double>> grid;
};

// psi(p) = ||source||_p evaluated on demand.  Built by the moment layer,
// which supplies the norm evaluator; the source is retained so the object
// can be serialized and rebuilt.
struct NumericNaturalPsi {
  std::function<double(double)> norm_at;
  std::shared_ptr<const FunctionSpec> spec_source;  // exactly one source is set
  std::shared_ptr<const TailFunction> tail_source;
  double tol = 1e-10;
};

class GeneratingFunction {
 public:
  using Variant = std::variant<PowerPsi, NaturalStretchedExpPsi, TabulatedPsi,
                               NumericNaturalPsi>;

  GeneratingFunction(PowerPsi v, double support_lo = 0.0,
                     double support_hi = kInf);
  GeneratingFunction(NaturalStretchedExpPsi v, double support_lo = 0.0,
                     double support_hi = kInf);
  explicit GeneratingFunction(TabulatedPsi v);  // support = node range
  GeneratingFunction(NumericNaturalPsi v, double support_lo, double support_hi);

  const Variant& node() const { return v_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

 private:
  Variant v_;
  double lo_ = 0.0;
  double hi_ = kInf;
};

// psi(p); +inf outside the support.  Analytic families use the open
// interval, tabulated families answer on the closed node range.
double eval_psi(const GeneratingFunction& psi, double p);

}  // namespace glstail
