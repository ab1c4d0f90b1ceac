#pragma once

#include <string>
#include <utility>
#include <vector>

#include "glstail/fenchel.hpp"

namespace glstail {

struct TailBound {
  double value = 0.0;
  bool in_theorem_region = false;  // t > e * gamma_norm
};

// exp(-nu*(ln(t / gamma_norm))): the tail estimate induced by psi and the
// scale gamma_norm.  A +inf conjugate gives a zero bound.  Requires
// gamma_norm > 0 and t > 0.
TailBound tail_upper_bound(const GeneratingFunction& psi, double gamma_norm,
                           double t, double tol = 1e-8);

struct BoundReport {
  std::vector<double> t_grid;
  std::vector<double> bound;
  std::vector<double> actual;
  std::vector<bool> in_region;
  bool dominated = true;    // bound >= actual at every in-region point
  double ratio_min = kInf;  // over points with actual > 0 and both finite
  double ratio_max = -kInf;
  int ratio_points = 0;
  int excluded_points = 0;  // points skipped by the ratio statistics
  double validity_region_start = 0.0;  // e * gamma_norm
  double gamma_norm = 1.0;
};

// Evaluates bound and exact tail on a grid and checks domination on the
// region t > e * gamma_norm.
BoundReport verify_domination(const FunctionSpec& spec,
                              const GeneratingFunction& psi, double gamma_norm,
                              const std::vector<double>& t_grid,
                              double tol = 1e-8);

// (min, max) of bound/actual for f = exp(-x^theta) with its natural psi and
// gamma = 1, over a t-grid inside (0, 1).  The two coincide when the bound
// is a constant multiple of the tail.
std::pair<double, double> sharpness_ratio(double theta,
                                          const std::vector<double>& t_grid);

// exp(-(t/C1)^m / (m e)): closed form of the bound for psi(p) = C1 p^{1/m}
// with unit scale.
double subgaussian_bound(double m, double C1, double t);

// CSV with header t,bound,actual,in_region (in_region as 0/1).
std::string bound_report_csv(const BoundReport& report);

// Single-line JSON summary with deterministic key order.
std::string bound_report_summary_json(const BoundReport& report);

}  // namespace glstail
