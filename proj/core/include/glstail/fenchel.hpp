#pragma once

#include "glstail/function_model.hpp"

namespace glstail {

enum class ConjugateMethod { kClosedForm, kNumeric };

struct ConjugateResult {
  double u = 0.0;
  double value = 0.0;        // may be +inf (supremum unbounded)
  double argmax_p = 0.0;     // supremum location; +inf when unbounded
  bool at_boundary = false;  // supremum attained at/toward a support edge
  ConjugateMethod method = ConjugateMethod::kNumeric;
};

// nu(p) = p ln psi(p).  Throws when p lies outside the support.
double nu(const GeneratingFunction& psi, double p);

// Regional convex conjugate nu*(u) = sup_{p in support} (p u - nu(p)).
// Families with a stationary point in closed form use it when that point
// is interior; every other case falls back to the numeric route.
// Tabulated psi takes the best node refined by a local parabolic fit.
ConjugateResult fenchel_conjugate(const GeneratingFunction& psi, double u,
                                  double tol = 1e-8);

// The scan + golden-section route, regardless of family; used for
// cross-checks and for supports where no closed form applies.
ConjugateResult fenchel_conjugate_numeric(const GeneratingFunction& psi,
                                          double u, double tol = 1e-8);

}  // namespace glstail
