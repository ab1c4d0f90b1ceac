#include "glstail/moments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

namespace glstail {
namespace {

void check_p(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw std::domain_error("lp norm: requires finite p > 0");
  }
}

// ln ||f||_p^p where a closed form exists.
std::optional<double> closed_log_power(const FunctionSpec& spec, double p) {
  struct Visitor {
    double p;
    std::optional<double> operator()(const StretchedExp& f) const {
      // int_0^inf exp(-cp x^theta) dx = (1/theta) (cp)^{-1/theta} Gamma(1/theta)
      return -std::log(f.theta) - std::log(f.c * p) / f.theta +
             std::lgamma(1.0 / f.theta);
    }
    std::optional<double> operator()(const LogSingular&) const {
      // int_{-1}^{0} |ln|x||^p dx = Gamma(p+1)
      return std::lgamma(p + 1.0);
    }
    std::optional<double> operator()(const TruncatedExp&) const {
      // int_0^inf exp(-py) dy = 1/p
      return -std::log(p);
    }
    std::optional<double> operator()(const Indicator01Scaled&) const {
      return std::nullopt;
    }
    std::optional<double> operator()(const DisjointUnion& u) const {
      double m = -kInf;
      std::vector<double> terms;
      terms.reserve(u.parts.size());
      for (const auto& part : u.parts) {
        const auto lp = closed_log_power(part, p);
        if (!lp) return std::nullopt;
        terms.push_back(*lp);
        m = std::max(m, *lp);
      }
      double s = 0.0;
      for (double t : terms) s += std::exp(t - m);
      return m + std::log(s);
    }
  };
  return std::visit(Visitor{p}, spec.node());
}

// Integrates `f` over (lo, hi) to a relative target: a budget-capped coarse
// pass sizes the integral, a second pass refines against tol * max(1, size).
// Returns the refined value; throws when the error estimate stays above
// 4x the scaled tolerance.
double integrate_relative(const std::function<double(double)>& f, double lo,
                          double hi, double tol, const char* who) {
  IntegrateOptions coarse;
  coarse.tol = tol;
  coarse.max_evaluations = 3000;
  const IntegralResult first = integrate(f, lo, hi, coarse);
  if (!std::isfinite(first.value)) {
    throw MomentDivergence(std::string(who) + ": integral diverged", 0.0,
                           first.value);
  }
  if (first.converged) return first.value;

  IntegrateOptions fine;
  fine.tol = tol * std::max(1.0, std::fabs(first.value));
  const IntegralResult second = integrate(f, lo, hi, fine);
  if (!std::isfinite(second.value)) {
    throw MomentDivergence(std::string(who) + ": integral diverged", 0.0,
                           second.value);
  }
  if (second.abs_error > 4.0 * fine.tol) {
    throw std::runtime_error(std::string(who) +
                             ": quadrature did not reach the tolerance");
  }
  return second.value;
}

// ln |f(x)|; -inf where f vanishes.  Forming |f|^p as exp(p ln|f|) keeps
// small p accurate: eval_function underflows to zero once the exponent
// passes ~-745 even though |f|^p still carries mass there.
double log_eval_function(const FunctionSpec& spec, double x) {
  struct Visitor {
    double x;
    double operator()(const StretchedExp& f) const {
      if (!(x > 0.0)) return -kInf;
      return -f.c * std::pow(x, f.theta);
    }
    double operator()(const LogSingular&) const {
      if (!(x > -1.0 && x < 0.0)) return -kInf;
      const double v = -std::log(-x);
      return v > 0.0 ? std::log(v) : -kInf;
    }
    double operator()(const TruncatedExp&) const {
      return x > 0.0 ? -x : -kInf;
    }
    double operator()(const Indicator01Scaled& f) const {
      if (!(x > 0.0 && x < 1.0)) return -kInf;
      return log_eval_function(*f.inner, x);
    }
    double operator()(const DisjointUnion& u) const {
      for (const auto& part : u.parts) {
        const double v = log_eval_function(part, x);
        if (v != -kInf) return v;
      }
      return -kInf;
    }
  };
  return std::visit(Visitor{x}, spec.node());
}

// ||f||_p^p by quadrature over every domain interval.
double direct_power(const FunctionSpec& spec, double p, double tol) {
  double total = 0.0;
  for (const Interval& iv : spec.domain()) {
    auto integrand = [&spec, p](double x) {
      const double lv = log_eval_function(spec, x);
      return lv == -kInf ? 0.0 : std::exp(p * lv);
    };
    total += integrate_relative(integrand, iv.lo, iv.hi, tol, "lp_norm_direct");
  }
  return total;
}

double norm_from_log_power(double log_power, double p) {
  return std::exp(log_power / p);
}

}  // namespace

std::optional<double> lp_norm_closed(const FunctionSpec& spec, double p) {
  check_p(p);
  const auto lp = closed_log_power(spec, p);
  if (!lp) return std::nullopt;
  return norm_from_log_power(*lp, p);
}

double lp_norm_direct(const FunctionSpec& spec, double p, double tol) {
  check_p(p);
  const double power = direct_power(spec, p, tol);
  if (power <= 0.0) return 0.0;
  return norm_from_log_power(std::log(power), p);
}

double lp_norm_from_tail(const TailFunction& tail, double p, double tol) {
  check_p(p);
  // ||f||_p^p = p * int_0^end t^{p-1} T(t) dt, split at tail breakpoints
  // and at t = 1 (sign change of the ln t factor in the exponent).
  const double end = tail_support_end(tail);
  std::vector<double> cuts{0.0};
  for (double b : tail_breakpoints(tail)) {
    if (b > 0.0 && b < end) cuts.push_back(b);
  }
  if (1.0 < end) cuts.push_back(1.0);
  cuts.push_back(end);  // +inf allowed: last segment is mapped
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&tail, p](double t) {
    const double lt = tail_log(tail, t);
    if (lt == -kInf) return 0.0;
    return std::exp((p - 1.0) * std::log(t) + lt);
  };

  const double seg_tol = tol / static_cast<double>(cuts.size());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    try {
      total +=
          integrate_relative(integrand, cuts[i], cuts[i + 1], seg_tol,
                             "lp_norm_from_tail");
    } catch (MomentDivergence&) {
      throw MomentDivergence("lp_norm_from_tail: p-th moment diverges", p,
                             total);
    }
  }

  if (!(total >= 0.0) || !std::isfinite(total)) {
    throw MomentDivergence("lp_norm_from_tail: p-th moment diverges", p, total);
  }
  if (total == 0.0) return 0.0;
  const double log_norm = (std::log(p) + std::log(total)) / p;
  if (log_norm > 709.0) {
    throw MomentDivergence(
        "lp_norm_from_tail: p-th moment exceeds the double range", p, total);
  }
  return std::exp(log_norm);
}

namespace {

GeneratingFunction tabulate_psi(const std::function<double(double)>& norm_at,
                                double lo, double hi,
                                const NaturalPsiOptions& opt) {
  if (!(lo > 0.0) || !std::isfinite(lo)) {
    throw std::domain_error("natural_psi: tabulation requires 0 < lo");
  }
  if (!(hi > lo)) throw std::domain_error("natural_psi: requires lo < hi");
  if (opt.grid_size < 2) {
    throw std::domain_error("natural_psi: grid_size must be at least 2");
  }
  const double top = std::min(hi, 1000.0);  // cap an unbounded support
  if (!(top > lo)) {
    throw std::domain_error("natural_psi: support starts past the grid cap");
  }

  TabulatedPsi tab;
  tab.grid.reserve(static_cast<std::size_t>(opt.grid_size));
  const double llo = std::log(lo);
  const double lhi = std::log(top);
  for (int i = 0; i < opt.grid_size; ++i) {
    const double w = static_cast<double>(i) / (opt.grid_size - 1);
    const double p = std::exp(llo + (lhi - llo) * w);
    const double psi = norm_at(p);
    if (!std::isfinite(psi) || psi <= 0.0) {
      throw std::domain_error(
          "natural_psi: ||f||_p is zero or non-finite at p = " +
          std::to_string(p));
    }
    tab.grid.emplace_back(p, psi);
  }
  return GeneratingFunction(std::move(tab));
}

std::function<double(double)> spec_norm_evaluator(
    std::shared_ptr<const FunctionSpec> spec, double tol) {
  return [spec, tol](double p) {
    const auto closed = lp_norm_closed(*spec, p);
    return closed ? *closed : lp_norm_direct(*spec, p, tol);
  };
}

std::function<double(double)> tail_norm_evaluator(
    std::shared_ptr<const TailFunction> tail, double tol) {
  return [tail, tol](double p) { return lp_norm_from_tail(*tail, p, tol); };
}

}  // namespace

GeneratingFunction natural_psi(const FunctionSpec& spec, double lo, double hi,
                               const NaturalPsiOptions& opt) {
  if (const auto* f = std::get_if<StretchedExp>(&spec.node())) {
    return GeneratingFunction(NaturalStretchedExpPsi{f->c, f->theta}, lo, hi);
  }
  auto shared = std::make_shared<const FunctionSpec>(spec);
  return tabulate_psi(spec_norm_evaluator(shared, opt.tol), lo, hi, opt);
}

GeneratingFunction natural_psi(const TailFunction& tail, double lo, double hi,
                               const NaturalPsiOptions& opt) {
  auto shared = std::make_shared<const TailFunction>(tail);
  return tabulate_psi(tail_norm_evaluator(shared, opt.tol), lo, hi, opt);
}

GeneratingFunction numeric_natural_psi(const FunctionSpec& spec, double lo,
                                       double hi, double tol) {
  NumericNaturalPsi node;
  auto shared = std::make_shared<const FunctionSpec>(spec);
  node.norm_at = spec_norm_evaluator(shared, tol);
  node.spec_source = std::move(shared);
  node.tol = tol;
  return GeneratingFunction(std::move(node), lo, hi);
}

GeneratingFunction numeric_natural_psi(const TailFunction& tail, double lo,
                                       double hi, double tol) {
  NumericNaturalPsi node;
  auto shared = std::make_shared<const TailFunction>(tail);
  node.norm_at = tail_norm_evaluator(shared, tol);
  node.tail_source = std::move(shared);
  node.tol = tol;
  return GeneratingFunction(std::move(node), lo, hi);
}

}  // namespace glstail
