#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the installed binary with the given arguments, capturing stdout.
RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("GLSTAIL_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "GLSTAIL_BIN must point at the CLI binary");
  const std::string cmd = std::string("'") + bin + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), out};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::pair<double, double> parse_row(const std::string& line) {
  const std::size_t comma = line.find(',');
  REQUIRE(comma != std::string::npos);
  return {std::strtod(line.c_str(), nullptr),
          std::strtod(line.c_str() + comma + 1, nullptr)};
}

const std::string& fixture_dir() {
  static const std::string dir = [] {
    const auto d =
        std::filesystem::temp_directory_path() / "glstail_cli_fixtures";
    std::filesystem::create_directories(d);
    auto put = [&d](const char* name, const char* body) {
      std::ofstream(d / name, std::ios::binary) << body;
    };
    put("spec.json", R"({"family":"stretched_exp","c":1,"theta":2})");
    put("ls.json", R"({"family":"log_singular"})");
    put("bad.json", "{");
    put("se_tail.json", R"({"family":"stretched_exp_tail","C":1,"m":2})");
    put("lp_tail.json", R"({"family":"log_power_tail","theta":1})");
    return d.string();
  }();
  return dir;
}

std::string fx(const char* name) { return fixture_dir() + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::string out((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("tail subcommand prints the exact tail on a log grid") {
  const RunResult r = run_cli("tail --spec " + fx("spec.json") +
                              " --t-min 0.01 --t-max 2 --points 5");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "t,T");
  const auto first = parse_row(lines[1]);
  CHECK(first.first == 0.01);
  // mu{exp(-x^2) > t} = sqrt(ln(1/t)) below the essential sup.
  CHECK(std::fabs(first.second - std::sqrt(std::log(100.0))) < 1e-12);
  CHECK(lines[5] == "2,0");  // past the essential sup the tail vanishes
}

TEST_CASE("bad grids, missing files, and bad JSON use distinct exit codes") {
  const std::string tail_stub =
      "tail --spec " + fx("spec.json") + " --t-max 2 --points 5 --t-min ";
  CHECK(run_cli(tail_stub + "0").exit_code == 3);
  CHECK(run_cli("tail --spec " + fx("spec.json") +
                " --t-min 0.1 --t-max 2 --points 0")
            .exit_code == 3);
  CHECK(run_cli("tail --spec /nonexistent.json --t-min 0.1 --t-max 2 "
                "--points 5")
            .exit_code == 2);
  CHECK(run_cli("tail --spec " + fx("bad.json") +
                " --t-min 0.1 --t-max 2 --points 5")
            .exit_code == 2);
}

TEST_CASE("psi subcommand samples the closed-form norms") {
  const RunResult r =
      run_cli("psi --spec " + fx("spec.json") + " --a 0.5 --b 8 --grid 4");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "p,psi");
  for (int i = 1; i <= 4; ++i) {
    const auto [p, psi] = parse_row(lines[static_cast<std::size_t>(i)]);
    const double want =
        std::pow(0.5 * std::sqrt(std::numbers::pi / p), 1.0 / p);
    CHECK(std::fabs(psi - want) < 1e-9 * want);
  }
  const auto ends = parse_row(lines[1]);
  CHECK(ends.first == 0.5);
  CHECK(parse_row(lines[4]).first == 8.0);
}

TEST_CASE("psi subcommand validates its source and grid") {
  CHECK(run_cli("psi --spec " + fx("spec.json") + " --a 2 --b 2 --grid 1")
            .exit_code == 3);
  CHECK(run_cli("psi --spec " + fx("spec.json") + " --tail " +
                fx("se_tail.json") + " --a 1 --b 2 --grid 3")
            .exit_code == 2);
  CHECK(run_cli("psi --a 1 --b 2 --grid 3").exit_code == 2);
}

TEST_CASE("gls-norm reports natural-space membership with norm one") {
  const RunResult r =
      run_cli("gls-norm --spec " + fx("spec.json") + " --psi natural");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j.at("member").get<bool>() == true);
  CHECK(std::fabs(j.at("norm").get<double>() - 1.0) < 1e-6);
  CHECK(j.at("argmax_p").is_number());
  CHECK(j.at("attained_interior").is_boolean());
}

TEST_CASE("identical invocations produce identical bytes") {
  const std::string cmd =
      "gls-norm --spec " + fx("ls.json") + " --psi natural";
  const RunResult a = run_cli(cmd);
  const RunResult b = run_cli(cmd);
  REQUIRE(a.exit_code == 0);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.output == b.output);

  // Routing through --out must not change a byte either.
  const std::string out_path = fixture_dir() + "/tail_out.csv";
  const std::string tail_cmd = "tail --spec " + fx("spec.json") +
                               " --t-min 0.01 --t-max 2 --points 5";
  const RunResult to_stdout = run_cli(tail_cmd);
  REQUIRE(run_cli(tail_cmd + " --out " + out_path).exit_code == 0);
  CHECK(read_file(out_path) == to_stdout.output);
}

TEST_CASE("bound subcommand dominates an unbounded function everywhere") {
  const RunResult r = run_cli("bound --spec " + fx("ls.json") +
                              " --t-min 3 --t-max 30 --points 7");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 9);  // header + 7 rows + summary comment
  CHECK(lines[0] == "t,bound,actual,in_region");
  REQUIRE(lines[8].rfind("# ", 0) == 0);
  const nlohmann::json j = nlohmann::json::parse(lines[8].substr(2));
  CHECK(j.at("dominated").get<bool>() == true);
  CHECK(j.at("points").get<int>() == 7);
  CHECK(j.at("ratio_points").get<int>() == 7);
  CHECK(j.at("excluded_points").get<int>() == 0);
  CHECK(j.at("gamma").get<double>() == 1.0);
  CHECK(j.at("ratio_min").get<double>() > 4.0);
  CHECK(j.at("ratio_min").get<double>() < 4.5);
  CHECK(j.at("ratio_max").get<double>() > 13.0);
  CHECK(j.at("ratio_max").get<double>() < 14.5);
  CHECK(std::fabs(j.at("validity_region_start").get<double>() -
                  std::exp(1.0)) < 1e-12);
}

TEST_CASE("bound subcommand is vacuous past a bounded essential sup") {
  const std::string out_path = fixture_dir() + "/bound_out.csv";
  const std::string sum_path = fixture_dir() + "/bound_summary.json";
  const RunResult r = run_cli("bound --spec " + fx("spec.json") +
                              " --t-min 3 --t-max 30 --points 7 --out " +
                              out_path + " --summary " + sum_path);
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(read_file(out_path));
  REQUIRE(lines.size() == 8);  // summary goes to its own file
  CHECK(lines.back() == "30,0,0,1");
  const nlohmann::json j = nlohmann::json::parse(read_file(sum_path));
  CHECK(j.at("dominated").get<bool>() == true);
  CHECK(j.at("ratio_points").get<int>() == 0);
  CHECK(j.at("ratio_min").is_null());
  CHECK(j.at("ratio_max").is_null());
}

TEST_CASE("bound rejects a non-positive gamma") {
  CHECK(run_cli("bound --spec " + fx("spec.json") +
                " --gamma -1 --t-min 3 --t-max 30 --points 7")
            .exit_code == 3);
}

TEST_CASE("orlicz-check distinguishes convergent and divergent tails") {
  const RunResult conv =
      run_cli("orlicz-check --tail " + fx("se_tail.json") + " --k 2");
  REQUIRE(conv.exit_code == 0);
  const nlohmann::json jc = nlohmann::json::parse(conv.output);
  CHECK(jc.at("outcome").get<std::string>() == "Convergent");
  CHECK(jc.at("partial_values").size() == 5);

  const RunResult div =
      run_cli("orlicz-check --tail " + fx("lp_tail.json") + " --k 2");
  REQUIRE(div.exit_code == 0);
  CHECK(nlohmann::json::parse(div.output).at("outcome").get<std::string>() ==
        "Divergent");

  CHECK(run_cli("orlicz-check --tail " + fx("se_tail.json") + " --k 0.5")
            .exit_code == 3);
}

TEST_CASE("usage problems exit with code 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

}  // TEST_SUITE
