#pragma once

#include "glstail/function_model.hpp"

namespace glstail {

struct GlsNormResult {
  double norm = 0.0;       // +inf when f lies outside the space
  double argmax_p = 0.0;   // supremum location over the support
  bool attained_interior = false;
};

// ||f||_{G psi} = sup_{p in support} ||f||_p / psi(p).
//
// Tabulated psi is resolved as the supremum over its nodes (the grid is the
// ground truth there); analytic psi goes through the continuous maximizer.
// When a closed-form ||f||_p backs the objective, one quadrature cross-check
// at a probe p must agree to 1e-5 relative or the call aborts.
GlsNormResult gls_norm(const FunctionSpec& spec, const GeneratingFunction& psi,
                       double tol = 1e-8);

// Same supremum with ||f||_p taken from a tail function.
GlsNormResult gls_norm_from_tail(const TailFunction& tail,
                                 const GeneratingFunction& psi,
                                 double tol = 1e-8);

// Finite norm?
bool membership(const FunctionSpec& spec, const GeneratingFunction& psi,
                double tol = 1e-8);

}  // namespace glstail
