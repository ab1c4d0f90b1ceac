#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "glstail/function_model.hpp"

namespace glstail {

// Thrown when a p-th moment integral fails to converge in the divergent
// sense (truncations keep growing or a panel value is infinite).
class MomentDivergence : public std::runtime_error {
 public:
  MomentDivergence(const std::string& what, double p, double partial)
      : std::runtime_error(what), p_(p), partial_(partial) {}
  double p() const { return p_; }
  double partial() const { return partial_; }

 private:
  double p_;
  double partial_;
};

// Closed-form ||f||_p for the families that admit one; nullopt otherwise.
// Requires p > 0.
std::optional<double> lp_norm_closed(const FunctionSpec& spec, double p);

// ||f||_p by adaptive quadrature of |f|^p over the domain.
double lp_norm_direct(const FunctionSpec& spec, double p, double tol = 1e-10);

// ||f||_p from the tail alone via ||f||_p^p = p * int_0^inf t^{p-1} T(t) dt.
// Throws MomentDivergence when the moment is infinite.
double lp_norm_from_tail(const TailFunction& tail, double p, double tol = 1e-10);

struct NaturalPsiOptions {
  int grid_size = 64;   // tabulation nodes (>= 2)
  double tol = 1e-10;   // per-norm quadrature tolerance
};

// The natural generating function psi(p) = ||f||_p on (lo, hi).  The
// stretched-exponential family keeps its closed form; every other input is
// tabulated on a geometric p-grid (an infinite hi is capped at 1e3 for the
// grid).  Throws if any sampled norm is zero, infinite, or divergent.
GeneratingFunction natural_psi(const FunctionSpec& spec, double lo, double hi,
                               const NaturalPsiOptions& opt = {});
GeneratingFunction natural_psi(const TailFunction& tail, double lo, double hi,
                               const NaturalPsiOptions& opt = {});

// Exact-evaluation natural psi: every eval_psi call computes ||source||_p
// afresh (no tabulation error, at quadrature cost per call).
GeneratingFunction numeric_natural_psi(const FunctionSpec& spec, double lo,
                                       double hi, double tol = 1e-10);
GeneratingFunction numeric_natural_psi(const TailFunction& tail, double lo,
                                       double hi, double tol = 1e-10);

}  // namespace glstail
