#include "glstail/gls.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "glstail/moments.hpp"

namespace glstail {
namespace {

constexpr double kQuadTol = 1e-10;

// Supremum of exp(log_ratio(p)) over the psi support.  Tabulated psi is
// resolved on its own nodes; analytic psi goes through the continuous
// maximizer.  log_ratio returns -inf for excluded p.
GlsNormResult supremum(const GeneratingFunction& psi,
                       const std::function<double(double)>& log_ratio,
                       double tol) {
  GlsNormResult out;
  if (const auto* tab = std::get_if<TabulatedPsi>(&psi.node())) {
    const auto& g = tab->grid;
    std::size_t best = 0;
    double best_v = -kInf;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v = log_ratio(g[i].first);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    out.norm = std::exp(best_v);
    out.argmax_p = g[best].first;
    out.attained_interior = best > 0 && best + 1 < g.size();
    return out;
  }

  MaximizeOptions opt;
  opt.tol = tol;
  const MaxResult m =
      maximize_1d(log_ratio, psi.support_lo(), psi.support_hi(), opt);
  out.norm = std::isinf(m.max_value) ? kInf : std::exp(m.max_value);
  out.argmax_p = m.argmax;
  out.attained_interior = m.attained_interior;
  return out;
}

double log_psi_or_inf(const GeneratingFunction& psi, double p) {
  const double v = eval_psi(psi, p);
  return std::isfinite(v) ? std::log(v) : kInf;
}

// One quadrature evaluation compared against the closed form at a probe p;
// a disagreement means the two moment routes drifted apart and the result
// cannot be trusted.
void cross_check(const FunctionSpec& spec, const GeneratingFunction& psi,
                 double argmax_p) {
  // Families with singular factors keep the probe small; the pure
  // exponential family integrates stably at any p.
  const bool exponential = std::holds_alternative<StretchedExp>(spec.node());
  const double cap = exponential ? 1e6 : 16.0;
  const double lo = std::max(psi.support_lo() * (1.0 + 1e-9), 1e-6);
  const double hi = std::min(psi.support_hi() * (1.0 - 1e-9), cap);
  if (!(lo < hi)) return;  // no usable probe inside the support

  double probe = std::isfinite(argmax_p) ? argmax_p : hi;
  probe = std::min(std::max(probe, lo), hi);

  const auto closed = lp_norm_closed(spec, probe);
  if (!closed) return;
  const double direct = lp_norm_direct(spec, probe, kQuadTol);
  // Both routes overflowing past the double range at the same probe is
  // agreement, not drift; inf - inf would otherwise poison the comparison.
  if (!std::isfinite(*closed) || !std::isfinite(direct)) {
    if (std::isinf(*closed) && std::isinf(direct) && *closed == direct) return;
    throw std::runtime_error(
        "gls_norm: closed-form and quadrature moments disagree at p = " +
        std::to_string(probe));
  }
  if (std::fabs(direct - *closed) > 1e-5 * std::fabs(*closed)) {
    throw std::runtime_error(
        "gls_norm: closed-form and quadrature moments disagree at p = " +
        std::to_string(probe));
  }
}

}  // namespace

GlsNormResult gls_norm(const FunctionSpec& spec, const GeneratingFunction& psi,
                       double tol) {
  auto log_ratio = [&spec, &psi](double p) {
    const double lp = log_psi_or_inf(psi, p);
    if (lp == kInf) return -kInf;
    const auto closed = lp_norm_closed(spec, p);
    const double norm = closed ? *closed : lp_norm_direct(spec, p, kQuadTol);
    if (norm <= 0.0) return -kInf;
    return std::log(norm) - lp;
  };
  const GlsNormResult out = supremum(psi, log_ratio, tol);
  cross_check(spec, psi, out.argmax_p);
  return out;
}

GlsNormResult gls_norm_from_tail(const TailFunction& tail,
                                 const GeneratingFunction& psi, double tol) {
  auto log_ratio = [&tail, &psi](double p) {
    const double lp = log_psi_or_inf(psi, p);
    if (lp == kInf) return -kInf;
    double norm;
    try {
      norm = lp_norm_from_tail(tail, p, kQuadTol);
    } catch (const MomentDivergence&) {
      // The moment left the double range: this p cannot witness a finite
      // supremum, so it is excluded from the scan.
      return -kInf;
    }
    if (norm <= 0.0) return -kInf;
    return std::log(norm) - lp;
  };
  return supremum(psi, log_ratio, tol);
}

bool membership(const FunctionSpec& spec, const GeneratingFunction& psi,
                double tol) {
  return std::isfinite(gls_norm(spec, psi, tol).norm);
}

}  // namespace glstail
