// Command-line front end: tail evaluation, bound verification, generating
// function sampling, integrability checks, and space-norm computation.
//
// Exit codes: 0 success, 2 malformed input (CLI usage, JSON/CSV structure),
// 3 domain or computation errors (parameter ranges, divergent moments,
// quadrature failures).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "glstail/bounds.hpp"
#include "glstail/gls.hpp"
#include "glstail/io.hpp"
#include "glstail/moments.hpp"
#include "glstail/orlicz.hpp"

namespace {

using glstail::FunctionSpec;
using glstail::GeneratingFunction;

std::vector<double> log_grid(double lo, double hi, int n, const char* what) {
  if (!(lo > 0.0) || !std::isfinite(lo)) {
    throw std::domain_error(std::string(what) + ": lower grid end must be > 0");
  }
  if (!(hi >= lo) || !std::isfinite(hi)) {
    throw std::domain_error(std::string(what) +
                            ": upper grid end must be >= the lower end");
  }
  if (n < 1) throw std::domain_error(std::string(what) + ": points must be >= 1");
  if (n == 1) {
    if (hi != lo) {
      throw std::domain_error(std::string(what) +
                              ": a single point requires equal grid ends");
    }
    return {lo};
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  const double l0 = std::log(lo);
  const double l1 = std::log(hi);
  for (int i = 0; i < n; ++i) {
    out.push_back(std::exp(l0 + (l1 - l0) * i / (n - 1)));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << text;
}

// --psi accepts a file path or the literal "natural" (also the default):
// the stretched-exponential family keeps its closed natural psi, everything
// else evaluates ||f||_p on demand over p in (0.5, 512).
GeneratingFunction resolve_psi(const std::string& arg, const FunctionSpec& spec) {
  if (arg.empty() || arg == "natural") {
    if (const auto* f = std::get_if<glstail::StretchedExp>(&spec.node())) {
      return GeneratingFunction(glstail::NaturalStretchedExpPsi{f->c, f->theta});
    }
    return glstail::numeric_natural_psi(spec, 0.5, 512.0);
  }
  return glstail::load_psi_file(arg);
}

struct TailArgs {
  std::string spec;
  std::string out;
  double t_min = 0.0;
  double t_max = 0.0;
  int points = 0;
};

void run_tail(const TailArgs& a) {
  const FunctionSpec spec = glstail::load_spec_file(a.spec);
  const glstail::TailFunction tail = glstail::tail_of(spec);
  std::string csv = "t,T\n";
  for (double t : log_grid(a.t_min, a.t_max, a.points, "tail")) {
    csv += glstail::format_number(t);
    csv += ',';
    csv += glstail::format_number(glstail::eval_tail(tail, t));
    csv += '\n';
  }
  write_output(csv, a.out);
}

struct BoundArgs {
  std::string spec;
  std::string psi;
  std::string out;
  std::string summary;
  double gamma = 1.0;
  double t_min = 0.0;
  double t_max = 0.0;
  int points = 0;
  double tol = 1e-8;
};

void run_bound(const BoundArgs& a) {
  const FunctionSpec spec = glstail::load_spec_file(a.spec);
  const GeneratingFunction psi = resolve_psi(a.psi, spec);
  const auto grid = log_grid(a.t_min, a.t_max, a.points, "bound");
  const glstail::BoundReport rep =
      glstail::verify_domination(spec, psi, a.gamma, grid, a.tol);
  std::string csv = glstail::bound_report_csv(rep);
  const std::string summary = glstail::bound_report_summary_json(rep);
  if (a.summary.empty()) {
    csv += "# ";
    csv += summary;
    csv += '\n';
    write_output(csv, a.out);
  } else {
    write_output(csv, a.out);
    write_output(summary + "\n", a.summary);
  }
}

struct PsiArgs {
  std::string spec;
  std::string tail;
  std::string out;
  double a = 0.0;
  double b = 0.0;
  int grid = 0;
};

void run_psi(const PsiArgs& a) {
  if (a.spec.empty() == a.tail.empty()) {
    throw glstail::ParseError("psi: provide exactly one of --spec or --tail");
  }
  if (a.grid < 2) throw std::domain_error("psi: --grid must be at least 2");
  if (!(a.a > 0.0) || !(a.b > a.a) || !std::isfinite(a.b)) {
    throw std::domain_error("psi: requires 0 < a < b < inf");
  }

  std::vector<std::pair<double, double>> rows;
  rows.reserve(static_cast<std::size_t>(a.grid));
  if (!a.spec.empty()) {
    const FunctionSpec spec = glstail::load_spec_file(a.spec);
    for (double p : log_grid(a.a, a.b, a.grid, "psi")) {
      const auto closed = glstail::lp_norm_closed(spec, p);
      rows.emplace_back(p, closed ? *closed : glstail::lp_norm_direct(spec, p));
    }
  } else {
    const glstail::TailFunction tail = glstail::load_tail_file(a.tail);
    for (double p : log_grid(a.a, a.b, a.grid, "psi")) {
      rows.emplace_back(p, glstail::lp_norm_from_tail(tail, p));
    }
  }
  std::ostringstream out;
  glstail::psi_samples_to_csv(out, rows);
  write_output(out.str(), a.out);
}

struct OrliczArgs {
  std::string tail;
  std::string out;
  double k = 0.0;
  double tol = 1e-6;
};

void run_orlicz_check(const OrliczArgs& a) {
  const glstail::TailFunction tail = glstail::load_tail_file(a.tail);
  const glstail::ConditionVerdict verdict =
      glstail::condition_check(tail, a.k, a.tol);
  write_output(glstail::condition_verdict_json(verdict) + "\n", a.out);
}

struct GlsNormArgs {
  std::string spec;
  std::string psi;
  std::string out;
  double tol = 1e-8;
};

void run_gls_norm(const GlsNormArgs& a) {
  const FunctionSpec spec = glstail::load_spec_file(a.spec);
  const GeneratingFunction psi = resolve_psi(a.psi, spec);
  const glstail::GlsNormResult r = glstail::gls_norm(spec, psi, a.tol);
  std::string json = "{\"argmax_p\":" + glstail::format_number(r.argmax_p);
  json += ",\"attained_interior\":";
  json += r.attained_interior ? "true" : "false";
  json += ",\"member\":";
  json += std::isfinite(r.norm) ? "true" : "false";
  json += ",\"norm\":";
  json += std::isfinite(r.norm) ? glstail::format_number(r.norm) : "null";
  json += "}\n";
  write_output(json, a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Lp moments, generating functions, and exponential tail estimates"};
  app.require_subcommand(1);

  TailArgs tail_args;
  CLI::App* tail_cmd =
      app.add_subcommand("tail", "Evaluate the exact tail of a function spec "
                                 "on a log-spaced t grid (CSV t,T)");
  tail_cmd->add_option("--spec", tail_args.spec, "function spec JSON file")
      ->required();
  tail_cmd->add_option("--t-min", tail_args.t_min, "grid start (> 0)")
      ->required();
  tail_cmd->add_option("--t-max", tail_args.t_max, "grid end")->required();
  tail_cmd->add_option("--points", tail_args.points, "grid size")->required();
  tail_cmd->add_option("--out", tail_args.out, "write CSV here (default stdout)");

  BoundArgs bound_args;
  CLI::App* bound_cmd = app.add_subcommand(
      "bound", "Tail bound vs exact tail on a log-spaced grid, with a "
               "domination summary (CSV + JSON)");
  bound_cmd->add_option("--spec", bound_args.spec, "function spec JSON file")
      ->required();
  bound_cmd->add_option("--psi", bound_args.psi,
                        "psi file (JSON or CSV), or 'natural' (default)");
  bound_cmd->add_option("--gamma", bound_args.gamma,
                        "scale in the bound (default 1)");
  bound_cmd->add_option("--t-min", bound_args.t_min, "grid start (> 0)")
      ->required();
  bound_cmd->add_option("--t-max", bound_args.t_max, "grid end")->required();
  bound_cmd->add_option("--points", bound_args.points, "grid size")->required();
  bound_cmd->add_option("--tol", bound_args.tol, "conjugate tolerance");
  bound_cmd->add_option("--out", bound_args.out, "write CSV here");
  bound_cmd->add_option("--summary", bound_args.summary,
                        "write the JSON summary here instead of appending it "
                        "as a CSV comment");

  PsiArgs psi_args;
  CLI::App* psi_cmd = app.add_subcommand(
      "psi", "Sample the natural generating function psi(p) = ||f||_p on a "
             "log-spaced p grid (CSV p,psi)");
  psi_cmd->add_option("--spec", psi_args.spec, "function spec JSON file");
  psi_cmd->add_option("--tail", psi_args.tail, "tail file (JSON or CSV)");
  psi_cmd->add_option("--a", psi_args.a, "support start (> 0)")->required();
  psi_cmd->add_option("--b", psi_args.b, "support end")->required();
  psi_cmd->add_option("--grid", psi_args.grid, "grid size (>= 2)")->required();
  psi_cmd->add_option("--out", psi_args.out, "write CSV here");

  OrliczArgs orlicz_args;
  CLI::App* orlicz_cmd = app.add_subcommand(
      "orlicz-check", "Integrability check for int |dT|/T(./k) over nested "
                      "truncation windows (JSON verdict)");
  orlicz_cmd->add_option("--tail", orlicz_args.tail, "tail file (JSON or CSV)")
      ->required();
  orlicz_cmd->add_option("--k", orlicz_args.k, "denominator scale (> 1)")
      ->required();
  orlicz_cmd->add_option("--tol", orlicz_args.tol,
                         "final-increment threshold (default 1e-6)");
  orlicz_cmd->add_option("--out", orlicz_args.out, "write JSON here");

  GlsNormArgs gls_args;
  CLI::App* gls_cmd = app.add_subcommand(
      "gls-norm", "sup_p ||f||_p / psi(p) over the psi support (JSON)");
  gls_cmd->add_option("--spec", gls_args.spec, "function spec JSON file")
      ->required();
  gls_cmd->add_option("--psi", gls_args.psi,
                      "psi file (JSON or CSV), or 'natural'")
      ->required();
  gls_cmd->add_option("--tol", gls_args.tol, "maximizer tolerance");
  gls_cmd->add_option("--out", gls_args.out, "write JSON here");

  tail_cmd->callback([&] { run_tail(tail_args); });
  bound_cmd->callback([&] { run_bound(bound_args); });
  psi_cmd->callback([&] { run_psi(psi_args); });
  orlicz_cmd->callback([&] { run_orlicz_check(orlicz_args); });
  gls_cmd->callback([&] { run_gls_norm(gls_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const glstail::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
