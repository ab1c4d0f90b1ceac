#include "glstail/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "glstail/io.hpp"

namespace glstail {
namespace {

constexpr int kWindows = 5;

double window_eps(int j) { return std::pow(10.0, -2 * (j + 1)); }
double window_cap(int j) { return std::pow(10.0, j + 1); }

void check_scale(double k, const char* who) {
  if (!std::isfinite(k)) throw std::domain_error(std::string(who) + ": scale must be finite");
}

// Integrates `log_integrand` (exp applied pointwise) over (lo, hi) split at
// the given interior points.  Returns +inf when any panel blows up.
double window_integral(const std::function<double(double)>& log_integrand,
                       double lo, double hi, const std::vector<double>& splits,
                       double quad_tol) {
  if (!(lo < hi)) return 0.0;
  auto f = [&log_integrand](double t) {
    const double lv = log_integrand(t);
    return lv == -kInf ? 0.0 : std::exp(lv);
  };
  std::vector<double> cuts{lo};
  for (double s : splits) {
    if (s > lo && s < hi) cuts.push_back(s);
  }
  // Decade pre-cuts: a window can span fifteen orders of magnitude, and a
  // single Gauss-Kronrod panel that wide never places a node inside a
  // localized spike, so it converges to zero with a zero error estimate.
  for (int d = -12; d <= 12; ++d) {
    const double s = std::pow(10.0, d);
    if (s > lo && s < hi) cuts.push_back(s);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  IntegrateOptions opt;
  opt.tol = quad_tol / static_cast<double>(cuts.size());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const IntegralResult r = integrate(f, cuts[i], cuts[i + 1], opt);
    if (!std::isfinite(r.value)) return kInf;
    total += r.value;
  }
  return total;
}

enum class LadderTrend { kSettled, kGrowing, kInconclusive };

// Classifies the increments of the five nested window values.
LadderTrend classify(const std::vector<double>& values, double tol) {
  const double last = values.back();
  double d[kWindows - 1];
  for (int j = 0; j < kWindows - 1; ++j) {
    d[j] = values[static_cast<std::size_t>(j) + 1] -
           values[static_cast<std::size_t>(j)];
  }
  if (std::fabs(d[3]) <= tol * (1.0 + std::fabs(last))) {
    return LadderTrend::kSettled;
  }
  if (d[1] > 0.0 && d[2] > 0.0 && d[3] > 0.0) {
    const double r2 = d[2] / d[1];
    const double r3 = d[3] / d[2];
    if (r2 <= 0.45 && r3 <= 0.45) return LadderTrend::kSettled;
    if (d[0] > 0.0 && r2 >= 0.45 && r3 >= 0.45) return LadderTrend::kGrowing;
  }
  return LadderTrend::kInconclusive;
}

}  // namespace

double OrliczFunction::operator()(double u) const {
  if (!(u >= 0.0)) throw std::domain_error("OrliczFunction: requires u >= 0");
  if (u == 0.0) return 0.0;
  if (u < 1.0) return u * u * n1_;
  const double T = eval_tail(tail_, u);
  return T > 0.0 ? 1.0 / T : kInf;
}

double OrliczFunction::log_value(double u) const {
  if (!(u >= 0.0)) throw std::domain_error("OrliczFunction: requires u >= 0");
  if (u == 0.0) return -kInf;
  if (u < 1.0) return 2.0 * std::log(u) + std::log(n1_);
  return -tail_log(tail_, u);
}

OrliczFunction young_orlicz_from_tail(const TailFunction& tail) {
  const double T1 = eval_tail(tail, 1.0);
  if (!(T1 > 0.0)) {
    throw std::domain_error(
        "young_orlicz_from_tail: T(1) = 0, so 1/T has no finite value at the "
        "matching point u = 1");
  }
  return OrliczFunction(tail, 1.0 / T1);
}

ConditionVerdict condition_check(const TailFunction& tail, double k,
                                 double tol) {
  check_scale(k, "condition_check");
  if (!(k > 1.0)) throw std::domain_error("condition_check: requires k > 1");
  if (!(tol > 0.0)) throw std::domain_error("condition_check: requires tol > 0");

  const double end = tail_support_end(tail);
  const double end_eff = std::isfinite(end) ? end * (1.0 - 1e-15) : kInf;
  std::vector<double> splits = tail_breakpoints(tail);
  {
    const std::size_t n = splits.size();
    for (std::size_t i = 0; i < n; ++i) splits.push_back(splits[i] * k);
    std::sort(splits.begin(), splits.end());
  }

  // |dT(t)| / T(t/k), assembled in log space: both factors underflow long
  // before their ratio becomes negligible.
  auto log_integrand = [&tail, k](double t) {
    const double num = tail_log_neg_derivative(tail, t);
    if (num == -kInf) return -kInf;
    return num - tail_log(tail, t / k);
  };

  const double quad_tol = std::min(1e-9, tol * 1e-3);
  ConditionVerdict verdict;
  verdict.k = k;
  std::vector<double> values;
  values.reserve(kWindows);
  for (int j = 0; j < kWindows; ++j) {
    const double lo = window_eps(j);
    const double hi = std::min(window_cap(j), end_eff);
    const double v = window_integral(log_integrand, lo, hi, splits, quad_tol);
    verdict.partial_values.push_back({lo, window_cap(j), v});
    if (!std::isfinite(v)) {
      verdict.outcome = ConditionOutcome::kDivergent;
      return verdict;
    }
    values.push_back(v);
  }

  switch (classify(values, tol)) {
    case LadderTrend::kSettled:
      verdict.outcome = ConditionOutcome::kConvergent;
      break;
    case LadderTrend::kGrowing:
      verdict.outcome = ConditionOutcome::kDivergent;
      break;
    case LadderTrend::kInconclusive:
      verdict.outcome = ConditionOutcome::kIndeterminate;
      break;
  }
  return verdict;
}

double orlicz_modular(const TailFunction& tail, const OrliczFunction& N,
                      double K, double tol) {
  check_scale(K, "orlicz_modular");
  if (!(K > 0.0)) throw std::domain_error("orlicz_modular: requires K > 0");
  if (!(tol > 0.0)) throw std::domain_error("orlicz_modular: requires tol > 0");

  // If the tail keeps mass where N(./K) is already +inf, the modular is
  // infinite outright.
  const double n_end = tail_support_end(N.source());
  const double f_end = tail_support_end(tail);
  if (std::isfinite(n_end) && f_end > K * n_end * (1.0 + 1e-12)) {
    return kInf;
  }

  const double end_eff = std::isfinite(f_end) ? f_end * (1.0 - 1e-15) : kInf;
  std::vector<double> splits = tail_breakpoints(tail);
  splits.push_back(K);  // kink of N at u = 1
  for (double b : tail_breakpoints(N.source())) splits.push_back(b * K);
  std::sort(splits.begin(), splits.end());

  auto log_integrand = [&tail, &N, K](double t) {
    const double num = tail_log_neg_derivative(tail, t);
    if (num == -kInf) return -kInf;
    const double ln_n = N.log_value(t / K);
    if (ln_n == -kInf) return -kInf;
    return num + ln_n;
  };

  const double quad_tol = std::min(1e-9, tol);
  std::vector<double> values;
  values.reserve(kWindows);
  for (int j = 0; j < kWindows; ++j) {
    const double lo = window_eps(j);
    const double hi = std::min(window_cap(j), end_eff);
    const double v = window_integral(log_integrand, lo, hi, splits, quad_tol);
    if (!std::isfinite(v)) return kInf;
    values.push_back(v);
  }

  switch (classify(values, std::max(tol, 1e-8))) {
    case LadderTrend::kSettled:
      return values.back();
    case LadderTrend::kGrowing:
      return kInf;
    case LadderTrend::kInconclusive:
      throw std::runtime_error(
          "orlicz_modular: truncation ladder is inconclusive");
  }
  return kInf;  // unreachable
}

double find_finite_scale(const TailFunction& tail, const OrliczFunction& N,
                         double k_hint) {
  check_scale(k_hint, "find_finite_scale");
  if (!(k_hint > 1.0)) {
    throw std::domain_error("find_finite_scale: requires k_hint > 1");
  }
  const ConditionVerdict verdict = condition_check(tail, k_hint);
  if (verdict.outcome != ConditionOutcome::kConvergent) {
    throw std::domain_error(
        "find_finite_scale: condition check at k_hint is not convergent");
  }
  double K = k_hint;
  for (int j = 0; j < 20; ++j) {
    K *= 2.0;
    if (std::isfinite(orlicz_modular(tail, N, K))) return K;
  }
  throw std::runtime_error(
      "find_finite_scale: no finite modular within 20 doublings");
}

std::string condition_verdict_json(const ConditionVerdict& verdict) {
  std::string out = "{\"k\":" + format_number(verdict.k) + ",\"outcome\":\"";
  switch (verdict.outcome) {
    case ConditionOutcome::kConvergent:
      out += "Convergent";
      break;
    case ConditionOutcome::kDivergent:
      out += "Divergent";
      break;
    case ConditionOutcome::kIndeterminate:
      out += "Indeterminate";
      break;
  }
  out += "\",\"partial_values\":[";
  for (std::size_t i = 0; i < verdict.partial_values.size(); ++i) {
    const auto& s = verdict.partial_values[i];
    if (i > 0) out += ',';
    out += "{\"cap\":" + format_number(s.cap) +
           ",\"eps\":" + format_number(s.eps) +
           ",\"value\":" + format_number(s.value) + "}";
  }
  out += "]}";
  return out;
}

}  // namespace glstail
