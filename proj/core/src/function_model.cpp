#include "glstail/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glstail {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

// ln(sum exp(xi)) over possibly -inf entries.
double logsumexp(const std::vector<double>& xs) {
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

// ------------------------------ FunctionSpec -------------------------------

FunctionSpec::FunctionSpec(StretchedExp v) : v_(v) {
  require(finite_pos(v.c), "StretchedExp: c must be finite and > 0");
  require(finite_pos(v.theta), "StretchedExp: theta must be finite and > 0");
}

FunctionSpec::FunctionSpec(LogSingular v) : v_(v) {}

FunctionSpec::FunctionSpec(TruncatedExp v) : v_(v) {}

FunctionSpec::FunctionSpec(Indicator01Scaled v) : v_(std::move(v)) {
  const auto& node = std::get<Indicator01Scaled>(v_);
  require(node.inner != nullptr, "Indicator01Scaled: inner function missing");
  const bool on_positive_axis =
      std::holds_alternative<StretchedExp>(node.inner->node()) ||
      std::holds_alternative<TruncatedExp>(node.inner->node());
  require(on_positive_axis,
          "Indicator01Scaled: inner function must live on (0, +inf)");
}

FunctionSpec::FunctionSpec(DisjointUnion v) : v_(std::move(v)) {
  const auto& node = std::get<DisjointUnion>(v_);
  require(!node.parts.empty(), "DisjointUnion: needs at least one part");
  std::vector<Interval> all;
  for (const auto& part : node.parts) {
    const auto sub = part.domain();
    all.insert(all.end(), sub.begin(), sub.end());
  }
  std::sort(all.begin(), all.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    require(all[i + 1].lo >= all[i].hi,
            "DisjointUnion: part domains overlap");
  }
}

std::vector<Interval> FunctionSpec::domain() const {
  struct Visitor {
    std::vector<Interval> operator()(const StretchedExp&) const {
      return {Interval{0.0, kInf}};
    }
    std::vector<Interval> operator()(const LogSingular&) const {
      return {Interval{-1.0, 0.0}};
    }
    std::vector<Interval> operator()(const TruncatedExp&) const {
      return {Interval{0.0, kInf}};
    }
    std::vector<Interval> operator()(const Indicator01Scaled&) const {
      return {Interval{0.0, 1.0}};
    }
    std::vector<Interval> operator()(const DisjointUnion& u) const {
      std::vector<Interval> all;
      for (const auto& part : u.parts) {
        const auto sub = part.domain();
        all.insert(all.end(), sub.begin(), sub.end());
      }
      std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo;
      });
      return all;
    }
  };
  return std::visit(Visitor{}, v_);
}

double eval_function(const FunctionSpec& spec, double x) {
  struct Visitor {
    double x;
    double operator()(const StretchedExp& f) const {
      if (!(x > 0.0)) return 0.0;
      return std::exp(-f.c * std::pow(x, f.theta));
    }
    double operator()(const LogSingular&) const {
      if (!(x > -1.0 && x < 0.0)) return 0.0;
      return -std::log(-x);
    }
    double operator()(const TruncatedExp&) const {
      if (!(x > 0.0)) return 0.0;
      return std::exp(-x);
    }
    double operator()(const Indicator01Scaled& f) const {
      if (!(x > 0.0 && x < 1.0)) return 0.0;
      return eval_function(*f.inner, x);
    }
    double operator()(const DisjointUnion& u) const {
      for (const auto& part : u.parts) {
        const double v = eval_function(part, x);
        if (v != 0.0) return v;
      }
      return 0.0;
    }
  };
  if (std::isnan(x)) throw std::domain_error("eval_function: x is NaN");
  return std::visit(Visitor{x}, spec.node());
}

// ------------------------------ TailFunction -------------------------------

TailFunction::TailFunction(StretchedExpTail v) : v_(v) {
  require(finite_pos(v.C), "StretchedExpTail: C must be finite and > 0");
  require(finite_pos(v.m), "StretchedExpTail: m must be finite and > 0");
}

TailFunction::TailFunction(LogPowerTail v) : v_(v) {
  require(finite_pos(v.theta), "LogPowerTail: theta must be finite and > 0");
  require(finite_pos(v.coeff), "LogPowerTail: coeff must be finite and > 0");
  require(finite_pos(v.cutoff), "LogPowerTail: cutoff must be finite and > 0");
}

TailFunction::TailFunction(TabulatedTail v) : v_(std::move(v)) {
  const auto& g = std::get<TabulatedTail>(v_).grid;
  require(g.size() >= 2, "TabulatedTail: needs at least two rows");
  require(g.front().first > 0.0, "TabulatedTail: t values must be > 0");
  for (std::size_t i = 0; i < g.size(); ++i) {
    require(std::isfinite(g[i].first), "TabulatedTail: t values must be finite");
    require(std::isfinite(g[i].second) && g[i].second >= 0.0,
            "TabulatedTail: T values must be finite and >= 0");
    if (i > 0) {
      require(g[i].first > g[i - 1].first,
              "TabulatedTail: t values must be strictly increasing");
      require(g[i].second <= g[i - 1].second,
              "TabulatedTail: T values must be nonincreasing");
    }
  }
}

TailFunction::TailFunction(PiecewiseSumTail v) : v_(std::move(v)) {
  require(!std::get<PiecewiseSumTail>(v_).parts.empty(),
          "PiecewiseSumTail: needs at least one part");
}

namespace {

// Locates the segment of a tabulated grid containing t; -1 left of the
// grid, grid.size()-1 right of it.
std::ptrdiff_t tab_segment(const std::vector<std::pair<double, double>>& g,
                           double t) {
  if (t < g.front().first) return -1;
  if (t >= g.back().first) return static_cast<std::ptrdiff_t>(g.size()) - 1;
  auto it = std::upper_bound(
      g.begin(), g.end(), t,
      [](double x, const std::pair<double, double>& row) { return x < row.first; });
  return (it - g.begin()) - 1;
}

double tab_eval(const std::vector<std::pair<double, double>>& g, double t,
                bool* extrapolated) {
  const std::ptrdiff_t i = tab_segment(g, t);
  if (i < 0) {
    if (extrapolated) *extrapolated = true;
    return g.front().second;
  }
  if (i == static_cast<std::ptrdiff_t>(g.size()) - 1) {
    return t == g.back().first ? g.back().second : 0.0;
  }
  const auto [t0, y0] = g[static_cast<std::size_t>(i)];
  const auto [t1, y1] = g[static_cast<std::size_t>(i) + 1];
  const double w = (t - t0) / (t1 - t0);
  if (y0 > 0.0 && y1 > 0.0) {
    return std::exp((1.0 - w) * std::log(y0) + w * std::log(y1));
  }
  return y0 + (y1 - y0) * w;
}

// Slope of the tabulated interpolant at t (zero outside the grid).
double tab_neg_slope(const std::vector<std::pair<double, double>>& g, double t) {
  const std::ptrdiff_t i = tab_segment(g, t);
  if (i < 0 || i >= static_cast<std::ptrdiff_t>(g.size()) - 1) return 0.0;
  const auto [t0, y0] = g[static_cast<std::size_t>(i)];
  const auto [t1, y1] = g[static_cast<std::size_t>(i) + 1];
  if (y0 > 0.0 && y1 > 0.0) {
    const double alpha = (std::log(y1) - std::log(y0)) / (t1 - t0);
    return -alpha * tab_eval(g, t, nullptr);
  }
  return -(y1 - y0) / (t1 - t0);
}

void check_tail_arg(double t) {
  if (!(t > 0.0)) throw std::domain_error("tail: requires t > 0");
}

}  // namespace

double eval_tail(const TailFunction& tail, double t, bool* extrapolated) {
  check_tail_arg(t);
  struct Visitor {
    double t;
    bool* flag;
    double operator()(const StretchedExpTail& v) const {
      return std::exp(-v.C * std::pow(t, v.m));
    }
    double operator()(const LogPowerTail& v) const {
      if (t >= v.cutoff) return 0.0;
      return v.coeff * std::pow(std::log(v.cutoff / t), 1.0 / v.theta);
    }
    double operator()(const TabulatedTail& v) const {
      return tab_eval(v.grid, t, flag);
    }
    double operator()(const PiecewiseSumTail& v) const {
      double s = 0.0;
      for (const auto& part : v.parts) s += eval_tail(part, t, flag);
      return s;
    }
  };
  return std::visit(Visitor{t, extrapolated}, tail.node());
}

double tail_log(const TailFunction& tail, double t) {
  check_tail_arg(t);
  struct Visitor {
    double t;
    double operator()(const StretchedExpTail& v) const {
      return -v.C * std::pow(t, v.m);
    }
    double operator()(const LogPowerTail& v) const {
      if (t >= v.cutoff) return -kInf;
      return std::log(v.coeff) + std::log(std::log(v.cutoff / t)) / v.theta;
    }
    double operator()(const TabulatedTail& v) const {
      const double y = tab_eval(v.grid, t, nullptr);
      return y > 0.0 ? std::log(y) : -kInf;
    }
    double operator()(const PiecewiseSumTail& v) const {
      std::vector<double> terms;
      terms.reserve(v.parts.size());
      for (const auto& part : v.parts) terms.push_back(tail_log(part, t));
      return logsumexp(terms);
    }
  };
  return std::visit(Visitor{t}, tail.node());
}

TailFunction tail_of(const FunctionSpec& spec) {
  struct Visitor {
    TailFunction operator()(const StretchedExp& f) const {
      // mu{exp(-c x^theta) > t} = ((1/c) ln(1/t))^{1/theta} for t < 1.
      return TailFunction(LogPowerTail{f.theta, std::pow(f.c, -1.0 / f.theta), 1.0});
    }
    TailFunction operator()(const LogSingular&) const {
      // mu{|ln|x|| > t} on (-1,0) is exp(-t).
      return TailFunction(StretchedExpTail{1.0, 1.0});
    }
    TailFunction operator()(const TruncatedExp&) const {
      // mu{exp(-y) > t} = ln(1/t) for t < 1.
      return TailFunction(LogPowerTail{1.0, 1.0, 1.0});
    }
    TailFunction operator()(const Indicator01Scaled&) const {
      throw std::domain_error(
          "tail_of: the restriction's tail min(1, T_inner) leaves every "
          "representable tail family");
    }
    TailFunction operator()(const DisjointUnion& u) const {
      std::vector<TailFunction> parts;
      parts.reserve(u.parts.size());
      for (const auto& part : u.parts) parts.push_back(tail_of(part));
      return TailFunction(PiecewiseSumTail{std::move(parts)});
    }
  };
  return std::visit(Visitor{}, spec.node());
}

TailFunction scale_tail(const TailFunction& tail, double lambda) {
  require(finite_pos(lambda), "scale_tail: lambda must be finite and > 0");
  struct Visitor {
    double lambda;
    TailFunction operator()(const StretchedExpTail& v) const {
      return TailFunction(
          StretchedExpTail{v.C / std::pow(lambda, v.m), v.m});
    }
    TailFunction operator()(const LogPowerTail& v) const {
      return TailFunction(LogPowerTail{v.theta, v.coeff, v.cutoff * lambda});
    }
    TailFunction operator()(const TabulatedTail& v) const {
      TabulatedTail out = v;
      for (auto& row : out.grid) row.first *= lambda;
      return TailFunction(std::move(out));
    }
    TailFunction operator()(const PiecewiseSumTail& v) const {
      std::vector<TailFunction> parts;
      parts.reserve(v.parts.size());
      for (const auto& part : v.parts) parts.push_back(scale_tail(part, lambda));
      return TailFunction(PiecewiseSumTail{std::move(parts)});
    }
  };
  return std::visit(Visitor{lambda}, tail.node());
}

std::vector<double> tail_breakpoints(const TailFunction& tail) {
  struct Visitor {
    std::vector<double> operator()(const StretchedExpTail&) const { return {}; }
    std::vector<double> operator()(const LogPowerTail& v) const {
      return {v.cutoff};
    }
    std::vector<double> operator()(const TabulatedTail& v) const {
      std::vector<double> out;
      out.reserve(v.grid.size());
      for (const auto& row : v.grid) out.push_back(row.first);
      return out;
    }
    std::vector<double> operator()(const PiecewiseSumTail& v) const {
      std::vector<double> out;
      for (const auto& part : v.parts) {
        const auto sub = tail_breakpoints(part);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
  };
  std::vector<double> out = std::visit(Visitor{}, tail.node());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double tail_support_end(const TailFunction& tail) {
  struct Visitor {
    double operator()(const StretchedExpTail&) const { return kInf; }
    double operator()(const LogPowerTail& v) const { return v.cutoff; }
    double operator()(const TabulatedTail& v) const {
      for (const auto& row : v.grid) {
        if (row.second == 0.0) return row.first;
      }
      return v.grid.back().first;
    }
    double operator()(const PiecewiseSumTail& v) const {
      double end = 0.0;
      for (const auto& part : v.parts) {
        end = std::max(end, tail_support_end(part));
      }
      return end;
    }
  };
  return std::visit(Visitor{}, tail.node());
}

double tail_neg_derivative(const TailFunction& tail, double t) {
  check_tail_arg(t);
  struct Visitor {
    double t;
    double operator()(const StretchedExpTail& v) const {
      return v.C * v.m * std::pow(t, v.m - 1.0) * std::exp(-v.C * std::pow(t, v.m));
    }
    double operator()(const LogPowerTail& v) const {
      if (t >= v.cutoff) return 0.0;
      const double L = std::log(v.cutoff / t);
      return v.coeff * std::pow(L, 1.0 / v.theta - 1.0) / (v.theta * t);
    }
    double operator()(const TabulatedTail& v) const {
      return tab_neg_slope(v.grid, t);
    }
    double operator()(const PiecewiseSumTail& v) const {
      double s = 0.0;
      for (const auto& part : v.parts) s += tail_neg_derivative(part, t);
      return s;
    }
  };
  return std::visit(Visitor{t}, tail.node());
}

double tail_log_neg_derivative(const TailFunction& tail, double t) {
  check_tail_arg(t);
  struct Visitor {
    double t;
    double operator()(const StretchedExpTail& v) const {
      return std::log(v.C * v.m) + (v.m - 1.0) * std::log(t) -
             v.C * std::pow(t, v.m);
    }
    double operator()(const LogPowerTail& v) const {
      if (t >= v.cutoff) return -kInf;
      const double L = std::log(v.cutoff / t);
      return std::log(v.coeff / v.theta) +
             (1.0 / v.theta - 1.0) * std::log(L) - std::log(t);
    }
    double operator()(const TabulatedTail& v) const {
      const double s = tab_neg_slope(v.grid, t);
      return s > 0.0 ? std::log(s) : -kInf;
    }
    double operator()(const PiecewiseSumTail& v) const {
      std::vector<double> terms;
      terms.reserve(v.parts.size());
      for (const auto& part : v.parts) {
        terms.push_back(tail_log_neg_derivative(part, t));
      }
      return logsumexp(terms);
    }
  };
  return std::visit(Visitor{t}, tail.node());
}

// --------------------------- GeneratingFunction ----------------------------

namespace {

void check_support(double lo, double hi) {
  require(std::isfinite(lo) && lo >= 0.0,
          "GeneratingFunction: support must start at a finite p >= 0");
  require(hi > lo, "GeneratingFunction: support must satisfy lo < hi");
}

}  // namespace

GeneratingFunction::GeneratingFunction(PowerPsi v, double support_lo,
                                       double support_hi)
    : v_(v), lo_(support_lo), hi_(support_hi) {
  require(finite_pos(v.C1), "PowerPsi: C1 must be finite and > 0");
  require(finite_pos(v.m), "PowerPsi: m must be finite and > 0");
  check_support(lo_, hi_);
}

GeneratingFunction::GeneratingFunction(NaturalStretchedExpPsi v,
                                       double support_lo, double support_hi)
    : v_(v), lo_(support_lo), hi_(support_hi) {
  require(finite_pos(v.c), "NaturalStretchedExpPsi: c must be finite and > 0");
  require(finite_pos(v.theta),
          "NaturalStretchedExpPsi: theta must be finite and > 0");
  check_support(lo_, hi_);
}

GeneratingFunction::GeneratingFunction(TabulatedPsi v) : v_(std::move(v)) {
  const auto& g = std::get<TabulatedPsi>(v_).grid;
  require(g.size() >= 2, "TabulatedPsi: needs at least two rows");
  require(g.front().first > 0.0, "TabulatedPsi: p values must be > 0");
  for (std::size_t i = 0; i < g.size(); ++i) {
    require(std::isfinite(g[i].first), "TabulatedPsi: p values must be finite");
    require(finite_pos(g[i].second),
            "TabulatedPsi: psi values must be finite and > 0");
    if (i > 0) {
      require(g[i].first > g[i - 1].first,
              "TabulatedPsi: p values must be strictly increasing");
    }
  }
  lo_ = g.front().first;
  hi_ = g.back().first;
}

GeneratingFunction::GeneratingFunction(NumericNaturalPsi v, double support_lo,
                                       double support_hi)
    : v_(std::move(v)), lo_(support_lo), hi_(support_hi) {
  const auto& node = std::get<NumericNaturalPsi>(v_);
  require(static_cast<bool>(node.norm_at),
          "NumericNaturalPsi: norm evaluator missing");
  require(finite_pos(node.tol), "NumericNaturalPsi: tol must be > 0");
  check_support(lo_, hi_);
}

double eval_psi(const GeneratingFunction& psi, double p) {
  if (std::isnan(p)) throw std::domain_error("eval_psi: p is NaN");
  struct Visitor {
    const GeneratingFunction& host;
    double p;
    double operator()(const PowerPsi& v) const {
      if (!(p > host.support_lo() && p < host.support_hi())) return kInf;
      return v.C1 * std::pow(p, 1.0 / v.m);
    }
    double operator()(const NaturalStretchedExpPsi& v) const {
      if (!(p > host.support_lo() && p < host.support_hi())) return kInf;
      // ||exp(-c x^theta)||_p^p = (1/theta) (cp)^{-1/theta} Gamma(1/theta).
      const double log_pow = -std::log(v.theta) -
                             std::log(v.c * p) / v.theta +
                             std::lgamma(1.0 / v.theta);
      return std::exp(log_pow / p);
    }
    double operator()(const TabulatedPsi& v) const {
      const auto& g = v.grid;
      if (p < g.front().first || p > g.back().first) return kInf;
      if (p == g.back().first) return g.back().second;
      auto it = std::upper_bound(g.begin(), g.end(), p,
                                 [](double x, const std::pair<double, double>& row) {
                                   return x < row.first;
                                 });
      const std::size_t i = static_cast<std::size_t>(it - g.begin()) - 1;
      const auto [p0, y0] = g[i];
      const auto [p1, y1] = g[i + 1];
      const double w = (std::log(p) - std::log(p0)) / (std::log(p1) - std::log(p0));
      return std::exp((1.0 - w) * std::log(y0) + w * std::log(y1));
    }
    double operator()(const NumericNaturalPsi& v) const {
      if (!(p > host.support_lo() && p < host.support_hi())) return kInf;
      return v.norm_at(p);
    }
  };
  return std::visit(Visitor{psi, p}, psi.node());
}

}  // namespace glstail
