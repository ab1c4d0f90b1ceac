#include "glstail/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "glstail/io.hpp"
#include "glstail/moments.hpp"

namespace glstail {
namespace {

void check_gamma(double gamma_norm) {
  if (!(gamma_norm > 0.0) || !std::isfinite(gamma_norm)) {
    throw std::domain_error("tail bound: gamma must be finite and > 0");
  }
}

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error("tail bound: requires finite t > 0");
  }
}

}  // namespace

TailBound tail_upper_bound(const GeneratingFunction& psi, double gamma_norm,
                           double t, double tol) {
  check_gamma(gamma_norm);
  check_t(t);
  const double u = std::log(t / gamma_norm);
  const ConjugateResult conj = fenchel_conjugate(psi, u, tol);
  TailBound out;
  out.value = std::isinf(conj.value) ? 0.0 : std::exp(-conj.value);
  out.in_theorem_region = t > std::exp(1.0) * gamma_norm;
  return out;
}

BoundReport verify_domination(const FunctionSpec& spec,
                              const GeneratingFunction& psi, double gamma_norm,
                              const std::vector<double>& t_grid, double tol) {
  check_gamma(gamma_norm);
  if (t_grid.empty()) {
    throw std::domain_error("verify_domination: t_grid must be non-empty");
  }
  const TailFunction tail = tail_of(spec);

  BoundReport rep;
  rep.gamma_norm = gamma_norm;
  rep.validity_region_start = std::exp(1.0) * gamma_norm;
  rep.t_grid.reserve(t_grid.size());
  rep.bound.reserve(t_grid.size());
  rep.actual.reserve(t_grid.size());
  rep.in_region.reserve(t_grid.size());

  for (double t : t_grid) {
    const TailBound b = tail_upper_bound(psi, gamma_norm, t, tol);
    const double actual = eval_tail(tail, t);
    rep.t_grid.push_back(t);
    rep.bound.push_back(b.value);
    rep.actual.push_back(actual);
    rep.in_region.push_back(b.in_theorem_region);

    if (b.in_theorem_region && b.value < actual * (1.0 - 1e-9)) {
      rep.dominated = false;
    }
    if (actual > 0.0 && std::isfinite(actual) && std::isfinite(b.value)) {
      const double r = b.value / actual;
      rep.ratio_min = std::min(rep.ratio_min, r);
      rep.ratio_max = std::max(rep.ratio_max, r);
      ++rep.ratio_points;
    } else {
      ++rep.excluded_points;
    }
  }
  return rep;
}

std::pair<double, double> sharpness_ratio(double theta,
                                          const std::vector<double>& t_grid) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::domain_error("sharpness_ratio: theta must be finite and > 0");
  }
  if (t_grid.empty()) {
    throw std::domain_error("sharpness_ratio: t_grid must be non-empty");
  }
  const GeneratingFunction psi(NaturalStretchedExpPsi{1.0, theta});
  const TailFunction tail = tail_of(FunctionSpec(StretchedExp{1.0, theta}));

  double lo = kInf;
  double hi = -kInf;
  for (double t : t_grid) {
    if (!(t > 0.0 && t < 1.0)) {
      throw std::domain_error("sharpness_ratio: t_grid must lie inside (0, 1)");
    }
    const TailBound b = tail_upper_bound(psi, 1.0, t);
    const double actual = eval_tail(tail, t);
    const double r = b.value / actual;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

double subgaussian_bound(double m, double C1, double t) {
  if (!(m > 0.0) || !std::isfinite(m) || !(C1 > 0.0) || !std::isfinite(C1)) {
    throw std::domain_error("subgaussian_bound: m and C1 must be finite and > 0");
  }
  check_t(t);
  return std::exp(-std::pow(t / C1, m) / (m * std::exp(1.0)));
}

std::string bound_report_csv(const BoundReport& report) {
  std::string out = "t,bound,actual,in_region\n";
  for (std::size_t i = 0; i < report.t_grid.size(); ++i) {
    out += format_number(report.t_grid[i]);
    out += ',';
    out += format_number(report.bound[i]);
    out += ',';
    out += format_number(report.actual[i]);
    out += ',';
    out += report.in_region[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string bound_report_summary_json(const BoundReport& report) {
  std::string out = "{";
  out += "\"dominated\":";
  out += report.dominated ? "true" : "false";
  out += ",\"excluded_points\":" + std::to_string(report.excluded_points);
  out += ",\"gamma\":" + format_number(report.gamma_norm);
  out += ",\"points\":" + std::to_string(report.t_grid.size());
  if (report.ratio_points > 0) {
    out += ",\"ratio_max\":" + format_number(report.ratio_max);
    out += ",\"ratio_min\":" + format_number(report.ratio_min);
  } else {
    out += ",\"ratio_max\":null,\"ratio_min\":null";
  }
  out += ",\"ratio_points\":" + std::to_string(report.ratio_points);
  out += ",\"validity_region_start\":" + format_number(report.validity_region_start);
  out += "}";
  return out;
}

}  // namespace glstail
