#include "glstail/fenchel.hpp"

#include <cmath>
#include <stdexcept>

#include "glstail/moments.hpp"

namespace glstail {
namespace {

void check_u(double u) {
  if (!std::isfinite(u)) {
    throw std::domain_error("fenchel_conjugate: requires finite u");
  }
}

// p u - nu(p) with the formal extension: -inf wherever psi is +inf (outside
// the support) or the underlying moment diverges.
double objective(const GeneratingFunction& psi, double u, double p) {
  double value;
  try {
    value = eval_psi(psi, p);
  } catch (const MomentDivergence&) {
    return -kInf;
  }
  if (!std::isfinite(value)) return -kInf;
  return p * u - p * std::log(value);
}

ConjugateResult numeric_conjugate(const GeneratingFunction& psi, double u,
                                  double tol) {
  MaximizeOptions opt;
  opt.tol = tol;
  const MaxResult m = maximize_1d(
      [&psi, u](double p) { return objective(psi, u, p); }, psi.support_lo(),
      psi.support_hi(), opt);
  ConjugateResult out;
  out.u = u;
  out.value = m.max_value;
  out.argmax_p = std::isinf(m.max_value) ? kInf : m.argmax;
  out.at_boundary = !m.attained_interior;
  out.method = ConjugateMethod::kNumeric;
  return out;
}

ConjugateResult closed(double u, double value, double argmax_p,
                       bool at_boundary) {
  return ConjugateResult{u, value, argmax_p, at_boundary,
                         ConjugateMethod::kClosedForm};
}

// Best tabulated node refined by a parabola through the three neighboring
// (ln p, phi) samples; the parabola never undershoots the node value.
ConjugateResult tabulated_conjugate(const TabulatedPsi& tab, double u) {
  const auto& g = tab.grid;
  std::size_t best = 0;
  double best_phi = -kInf;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double phi = g[i].first * u - g[i].first * std::log(g[i].second);
    if (phi > best_phi) {
      best_phi = phi;
      best = i;
    }
  }

  ConjugateResult out;
  out.u = u;
  out.method = ConjugateMethod::kNumeric;
  if (best == 0 || best + 1 == g.size()) {
    out.value = best_phi;
    out.argmax_p = g[best].first;
    out.at_boundary = true;
    return out;
  }

  const double x0 = std::log(g[best - 1].first);
  const double x1 = std::log(g[best].first);
  const double x2 = std::log(g[best + 1].first);
  auto phi_at = [&g, u](std::size_t i) {
    return g[i].first * u - g[i].first * std::log(g[i].second);
  };
  const double y0 = phi_at(best - 1);
  const double y1 = best_phi;
  const double y2 = phi_at(best + 1);

  // Newton form of the interpolating parabola in the ln p coordinate:
  // P(x) = y0 + d01 (x - x0) + curv (x - x0)(x - x1).
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  out.at_boundary = false;
  if (curv >= 0.0) {  // samples not locally concave: keep the node
    out.value = y1;
    out.argmax_p = g[best].first;
    return out;
  }
  double xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
  xv = std::min(std::max(xv, x0), x2);
  out.value = y0 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1);
  out.argmax_p = std::exp(xv);
  return out;
}

}  // namespace

double nu(const GeneratingFunction& psi, double p) {
  const double value = eval_psi(psi, p);
  if (!std::isfinite(value)) {
    throw std::domain_error("nu: p lies outside the support");
  }
  return p * std::log(value);
}

ConjugateResult fenchel_conjugate(const GeneratingFunction& psi, double u,
                                  double tol) {
  check_u(u);
  const double lo = psi.support_lo();
  const double hi = psi.support_hi();

  if (const auto* v = std::get_if<PowerPsi>(&psi.node())) {
    // phi(p) = p(u - ln C1) - (p/m) ln p peaks at ln p* = m(u - ln C1) - 1.
    const double pstar = std::exp(v->m * (u - std::log(v->C1)) - 1.0);
    if (pstar > lo && pstar < hi) {
      return closed(u, pstar / v->m, pstar, false);
    }
    return numeric_conjugate(psi, u, tol);
  }

  if (const auto* v = std::get_if<NaturalStretchedExpPsi>(&psi.node())) {
    // nu(p) = A - (1/theta) ln p with A = -ln(theta) - ln(c)/theta
    //         + ln Gamma(1/theta); phi(p) = p u - A + (1/theta) ln p.
    const double A = -std::log(v->theta) - std::log(v->c) / v->theta +
                     std::lgamma(1.0 / v->theta);
    if (u >= 0.0) {
      if (std::isinf(hi)) return closed(u, kInf, kInf, true);
      return numeric_conjugate(psi, u, tol);
    }
    const double pstar = -1.0 / (v->theta * u);
    if (pstar > lo && pstar < hi) {
      const double value = pstar * u - A + std::log(pstar) / v->theta;
      return closed(u, value, pstar, false);
    }
    return numeric_conjugate(psi, u, tol);
  }

  if (const auto* v = std::get_if<TabulatedPsi>(&psi.node())) {
    return tabulated_conjugate(*v, u);
  }

  return numeric_conjugate(psi, u, tol);
}

ConjugateResult fenchel_conjugate_numeric(const GeneratingFunction& psi,
                                          double u, double tol) {
  check_u(u);
  return numeric_conjugate(psi, u, tol);
}

}  // namespace glstail
