#include "glstail/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace glstail {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
// Nodes/weights from QUADPACK's dqk15; Gauss nodes are the odd-index
// abscissae plus the center.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double err = 0.0;
};

struct PanelErrLess {
  bool operator()(const Panel& x, const Panel& y) const { return x.err < y.err; }
};

[[noreturn]] void throw_nan() {
  throw std::runtime_error("integrate: integrand returned NaN");
}

// One Gauss-Kronrod 15(7) application on [a, b].  Error model follows
// QUADPACK: the raw |K15 - G7| estimate is damped through the total
// variation proxy resasc so that spiky panels are not over-trusted.
Panel gk15(const std::function<double(double)>& f, double a, double b,
           std::int64_t& evals) {
  const double center = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);

  const double fc = f(center);
  ++evals;
  if (std::isnan(fc)) throw_nan();

  double fv1[7];
  double fv2[7];
  double resg = kWg[3] * fc;
  double resk = kWgk[7] * fc;
  double resabs = std::fabs(resk);
  for (int j = 0; j < 7; ++j) {
    const double absc = hlgth * kXgk[j];
    const double f1 = f(center - absc);
    const double f2 = f(center + absc);
    evals += 2;
    if (std::isnan(f1) || std::isnan(f2)) throw_nan();
    fv1[j] = f1;
    fv2[j] = f2;
    const double fsum = f1 + f2;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    resk += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
  }

  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc +=
        kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  }

  const double dhlgth = std::fabs(hlgth);
  resabs *= dhlgth;
  resasc *= dhlgth;
  double err = std::fabs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50) {
    err = std::max(err, eps50 * resabs);
  }
  return Panel{a, b, resk * hlgth, err};
}

// Adaptive refinement over the initial partition `cuts` (sorted, strictly
// increasing).  Splits the worst panel until the summed error meets the
// tolerance, the evaluation budget runs out, or a panel value goes infinite.
IntegralResult adapt(const std::function<double(double)>& f,
                     const std::vector<double>& cuts,
                     const IntegrateOptions& opt) {
  std::priority_queue<Panel, std::vector<Panel>, PanelErrLess> heap;
  std::int64_t evals = 0;
  double total = 0.0;
  double toterr = 0.0;

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = gk15(f, cuts[i], cuts[i + 1], evals);
    total += p.value;
    toterr += p.err;
    heap.push(p);
  }

  bool diverged = !std::isfinite(total);
  while (!diverged && toterr > opt.tol && !heap.empty() &&
         evals + 30 <= opt.max_evaluations) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) continue;  // at ulp resolution
    Panel left = gk15(f, worst.a, mid, evals);
    Panel right = gk15(f, mid, worst.b, evals);
    total += left.value + right.value - worst.value;
    toterr += left.err + right.err - worst.err;
    diverged = !std::isfinite(total);
    heap.push(left);
    heap.push(right);
  }

  IntegralResult out;
  out.value = total;
  out.abs_error = diverged ? kInf : toterr;
  out.converged = !diverged && toterr <= opt.tol;
  out.evaluations = evals;
  return out;
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma: requires x > 0");
  // ln Gamma stays finite long past the point where Gamma overflows.
  if (std::lgamma(x) > 709.78) return kInf;
  return std::tgamma(x);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  return std::lgamma(x);
}

IntegralResult integrate(const std::function<double(double)>& f, double lower,
                         double upper, const IntegrateOptions& opt) {
  if (!std::isfinite(lower)) {
    throw std::domain_error("integrate: lower bound must be finite");
  }
  if (std::isnan(upper)) throw std::domain_error("integrate: upper bound is NaN");
  if (upper == lower) return IntegralResult{0.0, 0.0, true, 0};
  if (upper < lower) throw std::domain_error("integrate: upper < lower");

  if (std::isinf(upper)) {
    // u = lower + s/(1-s) maps (0,1) onto (lower, inf).  Pre-cut at
    // s = 10^k/(1+10^k) so that every decade of u gets its own panel;
    // otherwise mass concentrated far from the interval midpoints can sit
    // between rule nodes and be missed entirely.
    auto g = [&f, lower](double s) {
      const double om = 1.0 - s;
      // Splitting can push nodes so close to 1 that om rounds to zero.  The
      // transformed integrand of any integrable f tends to 0 there; returning
      // the limit avoids a spurious 0 * inf.  Divergent integrands still show
      // up through the surviving panel error.
      if (om <= 0.0) return 0.0;
      return f(lower + s / om) / (om * om);
    };
    std::vector<double> cuts;
    cuts.reserve(27);
    cuts.push_back(0.0);
    for (int k = -12; k <= 12; ++k) {
      const double d = std::pow(10.0, k);
      cuts.push_back(d / (1.0 + d));
    }
    cuts.push_back(1.0);
    return adapt(g, cuts, opt);
  }

  std::vector<double> cuts(5);
  for (int i = 0; i <= 4; ++i) {
    cuts[i] = lower + (upper - lower) * (static_cast<double>(i) / 4.0);
  }
  cuts[4] = upper;
  return adapt(f, cuts, opt);
}

IntegralResult integrate(const std::function<double(double)>& f, double lower,
                         double upper, double tol) {
  IntegrateOptions opt;
  opt.tol = tol;
  return integrate(f, lower, upper, opt);
}

namespace {

double eval_objective(const std::function<double(double)>& h, double x) {
  const double v = h(x);
  if (std::isnan(v)) {
    throw std::runtime_error("maximize_1d: objective returned NaN");
  }
  return v;
}

struct BestPoint {
  double x = 0.0;
  double v = -kInf;
};

// Golden-section ascent on [a, b]; assumes a maximum was bracketed.
// -inf values sort below everything, which steers the shrink away from
// excluded regions.
BestPoint golden_max(const std::function<double(double)>& h, double a,
                     double b, double xtol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = eval_objective(h, x1);
  double f2 = eval_objective(h, x2);
  BestPoint best = (f1 >= f2) ? BestPoint{x1, f1} : BestPoint{x2, f2};
  for (int it = 0; it < 200 && (b - a) > xtol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval_objective(h, x2);
      if (f2 > best.v) best = {x2, f2};
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval_objective(h, x1);
      if (f1 > best.v) best = {x1, f1};
    }
  }
  return best;
}

bool improves(double v, double incumbent) {
  return v > incumbent + 1e-9 * (1.0 + std::fabs(incumbent));
}

}  // namespace

MaxResult maximize_1d(const std::function<double(double)>& h, double lower,
                      double upper, const MaximizeOptions& opt) {
  if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
    throw std::domain_error("maximize_1d: requires lower < upper");
  }
  if (std::isinf(lower)) {
    throw std::domain_error("maximize_1d: lower bound must be finite");
  }

  const bool upper_inf = std::isinf(upper);
  const double span = upper_inf ? std::max(1.0, std::fabs(lower)) : (upper - lower);
  const double off = 1e-9 * span;
  const double lo = lower + off;
  const double cap = std::max(opt.expansion_cap, lo * 4.0);
  const double hi = upper_inf ? std::min(std::max(lower + 1e4 * span, 1e4), cap)
                              : upper - off;
  if (!(lo < hi)) throw std::domain_error("maximize_1d: interval too thin");

  const int n = std::max(opt.scan_points, 8);
  const bool log_grid = lo > 0.0 && hi / lo > 64.0;
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> vs(static_cast<std::size_t>(n));
  const double s0 = log_grid ? std::log(lo) : lo;
  const double s1 = log_grid ? std::log(hi) : hi;
  int best = -1;
  for (int i = 0; i < n; ++i) {
    const double s = s0 + (s1 - s0) * (static_cast<double>(i) / (n - 1));
    xs[static_cast<std::size_t>(i)] = log_grid ? std::exp(s) : s;
    vs[static_cast<std::size_t>(i)] =
        eval_objective(h, xs[static_cast<std::size_t>(i)]);
    if (best < 0 || vs[static_cast<std::size_t>(i)] >
                        vs[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  if (vs[static_cast<std::size_t>(best)] == -kInf) {
    throw std::runtime_error(
        "maximize_1d: objective is -inf on the whole scan grid");
  }

  double bracket_lo;
  double bracket_hi;
  BestPoint incumbent{xs[static_cast<std::size_t>(best)],
                      vs[static_cast<std::size_t>(best)]};

  if (best == n - 1 && upper_inf) {
    // Values peak at the scan frontier: probe geometrically toward the cap.
    double frontier_x = xs.back();
    double prev_x = xs[static_cast<std::size_t>(n - 2)];
    bool capped_rising = false;
    while (true) {
      double next_x = frontier_x * 4.0;
      const bool at_cap = next_x >= cap;
      if (at_cap) next_x = cap;
      const double v = eval_objective(h, next_x);
      if (improves(v, incumbent.v)) {
        prev_x = frontier_x;
        frontier_x = next_x;
        incumbent = {next_x, v};
        if (at_cap) {
          capped_rising = true;
          break;
        }
      } else {
        prev_x = frontier_x;
        frontier_x = next_x;
        break;
      }
    }
    if (capped_rising) {
      return MaxResult{cap, kInf, false};
    }
    bracket_lo = prev_x / 4.0;
    bracket_hi = frontier_x;
    bracket_lo = std::max(bracket_lo, lo);
  } else if (best == n - 1) {
    bracket_lo = xs[static_cast<std::size_t>(n - 2)];
    bracket_hi = hi;
  } else if (best == 0) {
    bracket_lo = lo;
    bracket_hi = xs[1];
  } else {
    bracket_lo = xs[static_cast<std::size_t>(best - 1)];
    bracket_hi = xs[static_cast<std::size_t>(best + 1)];
  }

  const double xtol =
      opt.tol * std::max(1.0, std::fabs(0.5 * (bracket_lo + bracket_hi)));
  BestPoint refined = golden_max(h, bracket_lo, bracket_hi, xtol);
  if (refined.v < incumbent.v) refined = incumbent;

  const double margin = std::max(2.0 * off, 4.0 * xtol);
  const bool interior = (refined.x > lower + margin) &&
                        (upper_inf || refined.x < upper - margin);
  return MaxResult{refined.x, refined.v, interior};
}

MaxResult maximize_1d(const std::function<double(double)>& h, double lower,
                      double upper, double tol) {
  MaximizeOptions opt;
  opt.tol = tol;
  return maximize_1d(h, lower, upper, opt);
}

}  // namespace glstail
