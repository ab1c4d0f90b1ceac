#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "glstail/function_model.hpp"

namespace {

using namespace glstail;

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::fabs(want);
}

// Independent distribution-function oracle: counts midpoint cells of the
// domain where |f| exceeds the level.  Infinite intervals are clipped at
// clip_hi, which callers pick far beyond the last crossing.
double measure_above(const FunctionSpec& spec, double level, double clip_hi,
                     int cells_per_interval) {
  double measure = 0.0;
  for (const Interval& iv : spec.domain()) {
    const double hi = std::min(iv.hi, clip_hi);
    const double w = (hi - iv.lo) / cells_per_interval;
    for (int i = 0; i < cells_per_interval; ++i) {
      const double x = iv.lo + (i + 0.5) * w;
      if (std::fabs(eval_function(spec, x)) > level) measure += w;
    }
  }
  return measure;
}

FunctionSpec log_plus_truncated() {
  return FunctionSpec(DisjointUnion{
      {FunctionSpec(LogSingular{}), FunctionSpec(TruncatedExp{})}});
}

}  // namespace

TEST_SUITE("function_model") {

TEST_CASE("eval_function honors each family's domain") {
  const FunctionSpec se{StretchedExp{2.0, 1.0}};
  CHECK(eval_function(se, 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(eval_function(se, -1.0) == 0.0);
  CHECK(eval_function(se, 0.0) == 0.0);

  const FunctionSpec ls{LogSingular{}};
  CHECK(eval_function(ls, -0.5) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(eval_function(ls, 0.5) == 0.0);
  CHECK(eval_function(ls, -1.5) == 0.0);

  const FunctionSpec te{TruncatedExp{}};
  CHECK(eval_function(te, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(eval_function(te, -2.0) == 0.0);

  const FunctionSpec ind{Indicator01Scaled{
      std::make_shared<FunctionSpec>(StretchedExp{2.0, 1.0})}};
  CHECK(eval_function(ind, 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(eval_function(ind, 1.5) == 0.0);

  const FunctionSpec uni = log_plus_truncated();
  CHECK(eval_function(uni, -0.5) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(eval_function(uni, 0.75) ==
        doctest::Approx(std::exp(-0.75)).epsilon(1e-15));

  CHECK_THROWS_AS(eval_function(se, std::nan("")), std::domain_error);
}

TEST_CASE("constructors reject out-of-range parameters") {
  CHECK_THROWS_AS(FunctionSpec(StretchedExp{0.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(FunctionSpec(StretchedExp{-1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(FunctionSpec(StretchedExp{1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(FunctionSpec(StretchedExp{std::nan(""), 1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(FunctionSpec(DisjointUnion{}), std::domain_error);
  CHECK_THROWS_AS(FunctionSpec(Indicator01Scaled{nullptr}), std::domain_error);
  // The restriction to (0, 1) is only defined for functions on (0, +inf).
  CHECK_THROWS_AS(FunctionSpec(Indicator01Scaled{
                      std::make_shared<FunctionSpec>(LogSingular{})}),
                  std::domain_error);

  CHECK_THROWS_AS(TailFunction(StretchedExpTail{-1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(TailFunction(StretchedExpTail{1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(TailFunction(LogPowerTail{1.0, 0.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(TailFunction(LogPowerTail{0.0, 1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(TailFunction(LogPowerTail{1.0, 1.0, -2.0}), std::domain_error);
  CHECK_THROWS_AS(TailFunction(PiecewiseSumTail{}), std::domain_error);

  CHECK_THROWS_AS(TailFunction(TabulatedTail{{{1.0, 0.5}}}), std::domain_error);
  CHECK_THROWS_AS(TailFunction(TabulatedTail{{{2.0, 0.5}, {1.0, 0.4}}}),
                  std::domain_error);
  CHECK_THROWS_AS(TailFunction(TabulatedTail{{{1.0, 0.1}, {2.0, 0.5}}}),
                  std::domain_error);
  CHECK_THROWS_AS(TailFunction(TabulatedTail{{{1.0, -0.1}, {2.0, -0.2}}}),
                  std::domain_error);
  CHECK_THROWS_AS(TailFunction(TabulatedTail{{{0.0, 0.5}, {1.0, 0.4}}}),
                  std::domain_error);

  CHECK_THROWS_AS(GeneratingFunction(PowerPsi{0.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(GeneratingFunction(PowerPsi{1.0, -1.0}), std::domain_error);
  CHECK_THROWS_AS(GeneratingFunction(PowerPsi{1.0, 1.0}, 2.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(GeneratingFunction(PowerPsi{1.0, 1.0}, -1.0, 2.0),
                  std::domain_error);
  CHECK_THROWS_AS(GeneratingFunction(NaturalStretchedExpPsi{0.0, 1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(GeneratingFunction(TabulatedPsi{{{1.0, 2.0}}}),
                  std::domain_error);
  CHECK_THROWS_AS(GeneratingFunction(TabulatedPsi{{{1.0, 0.0}, {2.0, 1.0}}}),
                  std::domain_error);
  CHECK_THROWS_AS(GeneratingFunction(TabulatedPsi{{{2.0, 1.0}, {1.0, 1.0}}}),
                  std::domain_error);
  CHECK_THROWS_AS(
      GeneratingFunction(NumericNaturalPsi{nullptr, nullptr, nullptr, 1e-10},
                         1.0, 2.0),
      std::domain_error);
}

TEST_CASE("disjoint unions require genuinely disjoint domains") {
  CHECK_NOTHROW(log_plus_truncated());
  // Both live on (0, +inf).
  CHECK_THROWS_AS(
      FunctionSpec(DisjointUnion{{FunctionSpec(TruncatedExp{}),
                                  FunctionSpec(StretchedExp{1.0, 1.0})}}),
      std::domain_error);
  // (0,1) restriction overlaps (0, +inf).
  CHECK_THROWS_AS(
      FunctionSpec(DisjointUnion{
          {FunctionSpec(Indicator01Scaled{
               std::make_shared<FunctionSpec>(TruncatedExp{})}),
           FunctionSpec(TruncatedExp{})}}),
      std::domain_error);

  const auto dom = log_plus_truncated().domain();
  REQUIRE(dom.size() == 2);
  CHECK(dom[0].lo == -1.0);
  CHECK(dom[0].hi == 0.0);
  CHECK(dom[1].lo == 0.0);
  CHECK(std::isinf(dom[1].hi));
}

TEST_CASE("tail_of produces the exact distribution function") {
  // mu{exp(-x^2) > t} = sqrt(ln(1/t)) below 1, zero above.
  const TailFunction t_se = tail_of(FunctionSpec(StretchedExp{1.0, 2.0}));
  CHECK(eval_tail(t_se, std::exp(-4.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eval_tail(t_se, 1.0) == 0.0);
  CHECK(eval_tail(t_se, 2.0) == 0.0);

  const TailFunction t_se2 = tail_of(FunctionSpec(StretchedExp{2.0, 0.5}));
  CHECK(eval_tail(t_se2, std::exp(-3.0)) ==
        doctest::Approx(0.25 * 9.0).epsilon(1e-13));

  const TailFunction t_ls = tail_of(FunctionSpec(LogSingular{}));
  CHECK(eval_tail(t_ls, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  const TailFunction t_te = tail_of(FunctionSpec(TruncatedExp{}));
  CHECK(eval_tail(t_te, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(eval_tail(t_te, 1.5) == 0.0);

  const TailFunction t_uni = tail_of(log_plus_truncated());
  CHECK(eval_tail(t_uni, 0.5) ==
        doctest::Approx(1.29967784027257873).epsilon(1e-15));

  CHECK_THROWS_AS(tail_of(FunctionSpec(Indicator01Scaled{
                      std::make_shared<FunctionSpec>(TruncatedExp{})})),
                  std::domain_error);
}

TEST_CASE("tail_of agrees with a midpoint level-set measurement") {
  const FunctionSpec se{StretchedExp{1.0, 2.0}};
  const double got_se = eval_tail(tail_of(se), 0.3);
  CHECK(std::fabs(got_se - measure_above(se, 0.3, 6.0, 1000000)) < 2e-5);

  const FunctionSpec uni = log_plus_truncated();
  const double got_uni = eval_tail(tail_of(uni), 0.5);
  CHECK(std::fabs(got_uni - measure_above(uni, 0.5, 8.0, 1000000)) < 2e-5);
}

TEST_CASE("eval_tail rejects nonpositive levels") {
  const TailFunction tail{StretchedExpTail{1.0, 1.0}};
  CHECK_THROWS_AS(eval_tail(tail, 0.0), std::domain_error);
  CHECK_THROWS_AS(eval_tail(tail, -1.0), std::domain_error);
  CHECK_THROWS_AS(eval_tail(tail, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(tail_log(tail, 0.0), std::domain_error);
  CHECK_THROWS_AS(tail_neg_derivative(tail, 0.0), std::domain_error);
}

TEST_CASE("log-power tails evaluate against the closed form") {
  const TailFunction tail{LogPowerTail{2.0, 3.0, 5.0}};
  CHECK(eval_tail(tail, 5.0 / std::exp(1.0)) ==
        doctest::Approx(3.0).epsilon(1e-14));
  CHECK(eval_tail(tail, 5.0) == 0.0);
  CHECK(eval_tail(tail, 7.0) == 0.0);
  CHECK(tail_support_end(tail) == 5.0);
  const auto brk = tail_breakpoints(tail);
  REQUIRE(brk.size() == 1);
  CHECK(brk[0] == 5.0);
}

TEST_CASE("tabulated tails interpolate log-linearly and flag extrapolation") {
  const TailFunction tail{TabulatedTail{{{1.0, 0.8}, {4.0, 0.1}}}};
  // 0.8^(2/3) * 0.1^(1/3) = (0.064)^(1/3) = 0.4.
  CHECK(eval_tail(tail, 2.0) == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(eval_tail(tail, 1.0) == 0.8);
  CHECK(eval_tail(tail, 4.0) == 0.1);
  CHECK(eval_tail(tail, 4.5) == 0.0);
  CHECK(eval_tail(tail, 1e9) == 0.0);

  bool flag = false;
  CHECK(eval_tail(tail, 0.5, &flag) == 0.8);
  CHECK(flag);
  flag = false;
  CHECK(eval_tail(tail, 2.5, &flag) > 0.0);
  CHECK_FALSE(flag);

  CHECK(tail_support_end(tail) == 4.0);
  const auto brk = tail_breakpoints(tail);
  REQUIRE(brk.size() == 2);
  CHECK(brk[0] == 1.0);
  CHECK(brk[1] == 4.0);
}

TEST_CASE("tabulated tails fall back to linear interpolation at zero values") {
  const TailFunction tail{TabulatedTail{{{1.0, 0.5}, {2.0, 0.0}}}};
  CHECK(eval_tail(tail, 1.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(eval_tail(tail, 3.0) == 0.0);
  CHECK(tail_support_end(tail) == 2.0);
  CHECK(tail_neg_derivative(tail, 1.5) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("scale_tail is evaluation-equivalent to a dilation") {
  const std::vector<TailFunction> tails = {
      TailFunction(StretchedExpTail{3.0, 1.5}),
      TailFunction(LogPowerTail{2.0, 3.0, 5.0}),
      TailFunction(TabulatedTail{{{1.0, 0.8}, {4.0, 0.1}}}),
      TailFunction(PiecewiseSumTail{{TailFunction(StretchedExpTail{1.0, 1.0}),
                                     TailFunction(LogPowerTail{1.0, 1.0, 1.0})}}),
  };
  const double lambda = 2.0;
  for (const auto& tail : tails) {
    const TailFunction scaled = scale_tail(tail, lambda);
    for (double t : {0.3, 1.0, 2.7, 9.0}) {
      const double want = eval_tail(tail, t / lambda);
      const double got = eval_tail(scaled, t);
      if (want == 0.0) {
        CHECK(got == 0.0);
      } else {
        CHECK(rel_err(got, want) < 1e-14);
      }
    }
    const double end = tail_support_end(tail);
    if (std::isinf(end)) {
      CHECK(std::isinf(tail_support_end(scaled)));
    } else {
      CHECK(tail_support_end(scaled) == doctest::Approx(lambda * end));
    }
  }
  CHECK_THROWS_AS(scale_tail(tails[0], 0.0), std::domain_error);
  CHECK_THROWS_AS(scale_tail(tails[0], -2.0), std::domain_error);
}

TEST_CASE("tail_log stays finite where the tail itself underflows") {
  const TailFunction tail{StretchedExpTail{1.0, 1.0}};
  CHECK(eval_tail(tail, 2000.0) == 0.0);                 // underflow
  CHECK(tail_log(tail, 2000.0) == doctest::Approx(-2000.0).epsilon(1e-15));

  const TailFunction twin{PiecewiseSumTail{
      {TailFunction(StretchedExpTail{1.0, 1.0}),
       TailFunction(StretchedExpTail{1.0, 1.0})}}};
  CHECK(tail_log(twin, 3000.0) ==
        doctest::Approx(std::log(2.0) - 3000.0).epsilon(1e-15));

  const TailFunction lp{LogPowerTail{1.0, 1.0, 1.0}};
  CHECK(tail_log(lp, 1.0) == -kInf);
  CHECK(tail_log(lp, 2.0) == -kInf);
  CHECK(tail_log(lp, 0.5) ==
        doctest::Approx(std::log(std::log(2.0))).epsilon(1e-14));
}

TEST_CASE("tail_neg_derivative matches central differences") {
  const TailFunction se{StretchedExpTail{2.0, 1.5}};
  const TailFunction lp{LogPowerTail{2.0, 3.0, 5.0}};
  const TailFunction tab{TabulatedTail{{{1.0, 0.8}, {4.0, 0.1}}}};
  const TailFunction sum{PiecewiseSumTail{{se, lp}}};
  const double h = 1e-6;
  auto central = [&](const TailFunction& tail, double t) {
    return (eval_tail(tail, t - h) - eval_tail(tail, t + h)) / (2.0 * h);
  };
  for (double t : {0.4, 1.1}) {
    CHECK(rel_err(tail_neg_derivative(se, t), central(se, t)) < 1e-6);
    CHECK(rel_err(tail_neg_derivative(sum, t), central(sum, t)) < 1e-6);
  }
  CHECK(rel_err(tail_neg_derivative(lp, 1.7), central(lp, 1.7)) < 1e-6);
  CHECK(rel_err(tail_neg_derivative(tab, 2.0), central(tab, 2.0)) < 1e-6);
}

TEST_CASE("tail_log_neg_derivative survives underflow of its factors") {
  const TailFunction se{StretchedExpTail{1.0, 2.0}};
  // -T'(t) = 2 t exp(-t^2); at t = 100 the exponential underflows.
  CHECK(tail_neg_derivative(se, 100.0) == 0.0);
  CHECK(tail_log_neg_derivative(se, 100.0) ==
        doctest::Approx(std::log(200.0) - 10000.0).epsilon(1e-12));
  // Where everything is representable the two routes agree.
  CHECK(rel_err(std::exp(tail_log_neg_derivative(se, 1.3)),
                tail_neg_derivative(se, 1.3)) < 1e-13);
  const TailFunction lp{LogPowerTail{1.0, 1.0, 1.0}};
  CHECK(tail_log_neg_derivative(lp, 2.0) == -kInf);
}

TEST_CASE("generating functions evaluate their closed forms") {
  const GeneratingFunction nat11{NaturalStretchedExpPsi{1.0, 1.0}};
  CHECK(eval_psi(nat11, 3.0) ==
        doctest::Approx(0.6933612743506347).epsilon(1e-14));

  const GeneratingFunction nat12{NaturalStretchedExpPsi{1.0, 2.0}};
  CHECK(eval_psi(nat12, 4.0) ==
        doctest::Approx(0.81588460084756769).epsilon(1e-14));

  const GeneratingFunction pw{PowerPsi{2.0, 0.5}};
  CHECK(eval_psi(pw, 3.0) == doctest::Approx(18.0).epsilon(1e-14));
  const GeneratingFunction pw3{PowerPsi{1.5, 3.0}};
  CHECK(eval_psi(pw3, 8.0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("the natural psi of the unit exponential satisfies p psi(p)^p = 1") {
  const GeneratingFunction nat{NaturalStretchedExpPsi{1.0, 1.0}};
  for (double p : {0.5, 1.0, 2.0, 7.0, 33.0}) {
    CHECK(std::fabs(p * std::pow(eval_psi(nat, p), p) - 1.0) < 1e-12);
  }
}

TEST_CASE("psi evaluation is +inf outside the support") {
  const GeneratingFunction pw(PowerPsi{1.0, 1.0}, 1.0, kInf);
  CHECK(std::isinf(eval_psi(pw, 0.5)));
  CHECK(std::isinf(eval_psi(pw, 1.0)));  // open at the endpoint
  CHECK(eval_psi(pw, 1.0 + 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(eval_psi(pw, std::nan("")), std::domain_error);
}

TEST_CASE("tabulated psi interpolates log-log on its closed node range") {
  const GeneratingFunction tab{TabulatedPsi{{{1.0, 2.0}, {4.0, 3.0}}}};
  CHECK(tab.support_lo() == 1.0);
  CHECK(tab.support_hi() == 4.0);
  CHECK(eval_psi(tab, 1.0) == 2.0);
  CHECK(eval_psi(tab, 4.0) == 3.0);
  // Geometric midpoint of the nodes: sqrt(2 * 3).
  CHECK(eval_psi(tab, 2.0) ==
        doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  CHECK(std::isinf(eval_psi(tab, 0.9)));
  CHECK(std::isinf(eval_psi(tab, 4.1)));
}

TEST_CASE("numeric natural psi delegates to its norm evaluator") {
  NumericNaturalPsi node;
  node.norm_at = [](double p) { return 2.0 * p; };
  node.tol = 1e-10;
  const GeneratingFunction psi(node, 1.0, 8.0);
  CHECK(eval_psi(psi, 3.0) == 6.0);
  CHECK(std::isinf(eval_psi(psi, 0.5)));
  CHECK(std::isinf(eval_psi(psi, 9.0)));
}

}  // TEST_SUITE
