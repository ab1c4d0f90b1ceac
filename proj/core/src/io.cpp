#include "glstail/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "glstail/moments.hpp"

namespace glstail {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

ordered_json parse_root(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) fail("invalid JSON document");
  return j;
}

const ordered_json& member(const ordered_json& j, const char* key) {
  if (!j.is_object()) fail("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field '") + key + "'");
  return *it;
}

double number_field(const ordered_json& j, const char* key) {
  const ordered_json& v = member(j, key);
  if (!v.is_number()) {
    fail(std::string("field '") + key + "' must be a number");
  }
  return v.get<double>();
}

double number_field_or(const ordered_json& j, const char* key, double dflt) {
  if (!j.is_object()) fail("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_number()) {
    fail(std::string("field '") + key + "' must be a number");
  }
  return it->get<double>();
}

std::string string_field(const ordered_json& j, const char* key) {
  const ordered_json& v = member(j, key);
  if (!v.is_string()) {
    fail(std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<std::pair<double, double>> grid_field(const ordered_json& j) {
  const ordered_json& g = member(j, "grid");
  if (!g.is_array()) fail("field 'grid' must be an array");
  std::vector<std::pair<double, double>> rows;
  rows.reserve(g.size());
  for (const auto& row : g) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() ||
        !row[1].is_number()) {
      fail("grid rows must be [number, number] pairs");
    }
    rows.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  return rows;
}

// Optional "support": [lo, hi], hi may be null for +inf.
std::pair<double, double> support_field(const ordered_json& j, double dflt_lo,
                                        double dflt_hi) {
  auto it = j.find("support");
  if (it == j.end()) return {dflt_lo, dflt_hi};
  const ordered_json& s = *it;
  if (!s.is_array() || s.size() != 2 || !s[0].is_number()) {
    fail("field 'support' must be [lo, hi]");
  }
  const double lo = s[0].get<double>();
  double hi;
  if (s[1].is_null()) {
    hi = kInf;
  } else if (s[1].is_number()) {
    hi = s[1].get<double>();
  } else {
    fail("support hi must be a number or null");
  }
  return {lo, hi};
}

ordered_json support_to(const GeneratingFunction& psi) {
  ordered_json s = ordered_json::array();
  s.push_back(psi.support_lo());
  if (std::isinf(psi.support_hi())) {
    s.push_back(nullptr);
  } else {
    s.push_back(psi.support_hi());
  }
  return s;
}

// ------------------------------ function specs -----------------------------

FunctionSpec spec_from(const ordered_json& j) {
  const std::string family = string_field(j, "family");
  if (family == "stretched_exp") {
    return FunctionSpec(
        StretchedExp{number_field(j, "c"), number_field(j, "theta")});
  }
  if (family == "log_singular") return FunctionSpec(LogSingular{});
  if (family == "truncated_exp") return FunctionSpec(TruncatedExp{});
  if (family == "indicator01") {
    auto inner =
        std::make_shared<const FunctionSpec>(spec_from(member(j, "inner")));
    return FunctionSpec(Indicator01Scaled{std::move(inner)});
  }
  if (family == "disjoint_union") {
    const ordered_json& parts = member(j, "parts");
    if (!parts.is_array() || parts.empty()) {
      fail("field 'parts' must be a non-empty array");
    }
    DisjointUnion u;
    u.parts.reserve(parts.size());
    for (const auto& item : parts) u.parts.push_back(spec_from(item));
    return FunctionSpec(std::move(u));
  }
  fail("unknown function family '" + family + "'");
}

ordered_json spec_to(const FunctionSpec& spec) {
  struct Visitor {
    ordered_json operator()(const StretchedExp& f) const {
      return {{"family", "stretched_exp"}, {"c", f.c}, {"theta", f.theta}};
    }
    ordered_json operator()(const LogSingular&) const {
      return {{"family", "log_singular"}};
    }
    ordered_json operator()(const TruncatedExp&) const {
      return {{"family", "truncated_exp"}};
    }
    ordered_json operator()(const Indicator01Scaled& f) const {
      ordered_json j{{"family", "indicator01"}};
      j["inner"] = spec_to(*f.inner);
      return j;
    }
    ordered_json operator()(const DisjointUnion& u) const {
      ordered_json j{{"family", "disjoint_union"}};
      ordered_json parts = ordered_json::array();
      for (const auto& part : u.parts) parts.push_back(spec_to(part));
      j["parts"] = std::move(parts);
      return j;
    }
  };
  return std::visit(Visitor{}, spec.node());
}

// --------------------------------- tails -----------------------------------

TailFunction tail_from(const ordered_json& j) {
  const std::string family = string_field(j, "family");
  if (family == "stretched_exp_tail") {
    return TailFunction(
        StretchedExpTail{number_field(j, "C"), number_field(j, "m")});
  }
  if (family == "log_power_tail") {
    return TailFunction(LogPowerTail{number_field(j, "theta"),
                                     number_field_or(j, "coeff", 1.0),
                                     number_field_or(j, "cutoff", 1.0)});
  }
  if (family == "tabulated_tail") {
    return TailFunction(TabulatedTail{grid_field(j)});
  }
  if (family == "piecewise_sum") {
    const ordered_json& parts = member(j, "parts");
    if (!parts.is_array() || parts.empty()) {
      fail("field 'parts' must be a non-empty array");
    }
    PiecewiseSumTail sum;
    sum.parts.reserve(parts.size());
    for (const auto& item : parts) sum.parts.push_back(tail_from(item));
    return TailFunction(std::move(sum));
  }
  fail("unknown tail family '" + family + "'");
}

ordered_json tail_to(const TailFunction& tail) {
  struct Visitor {
    ordered_json operator()(const StretchedExpTail& v) const {
      return {{"family", "stretched_exp_tail"}, {"C", v.C}, {"m", v.m}};
    }
    ordered_json operator()(const LogPowerTail& v) const {
      return {{"family", "log_power_tail"},
              {"theta", v.theta},
              {"coeff", v.coeff},
              {"cutoff", v.cutoff}};
    }
    ordered_json operator()(const TabulatedTail& v) const {
      ordered_json j{{"family", "tabulated_tail"}};
      ordered_json grid = ordered_json::array();
      for (const auto& row : v.grid) {
        grid.push_back(ordered_json::array({row.first, row.second}));
      }
      j["grid"] = std::move(grid);
      return j;
    }
    ordered_json operator()(const PiecewiseSumTail& v) const {
      ordered_json j{{"family", "piecewise_sum"}};
      ordered_json parts = ordered_json::array();
      for (const auto& part : v.parts) parts.push_back(tail_to(part));
      j["parts"] = std::move(parts);
      return j;
    }
  };
  return std::visit(Visitor{}, tail.node());
}

// ---------------------------------- psi ------------------------------------

GeneratingFunction psi_from(const ordered_json& j) {
  const std::string family = string_field(j, "family");
  if (family == "power_psi") {
    const auto [lo, hi] = support_field(j, 0.0, kInf);
    return GeneratingFunction(
        PowerPsi{number_field(j, "C1"), number_field(j, "m")}, lo, hi);
  }
  if (family == "natural_stretched_exp") {
    const auto [lo, hi] = support_field(j, 0.0, kInf);
    return GeneratingFunction(
        NaturalStretchedExpPsi{number_field(j, "c"), number_field(j, "theta")},
        lo, hi);
  }
  if (family == "tabulated_psi") {
    return GeneratingFunction(TabulatedPsi{grid_field(j)});
  }
  if (family == "natural") {
    const ordered_json& source = member(j, "source");
    const std::string kind = string_field(source, "kind");
    const auto [lo, hi] = support_field(j, 0.0, 0.0);
    if (!(hi > lo)) fail("'natural' psi requires an explicit support [lo, hi]");
    const double tol = number_field_or(j, "tol", 1e-10);
    if (kind == "spec") {
      return numeric_natural_psi(spec_from(member(source, "value")), lo, hi,
                                 tol);
    }
    if (kind == "tail") {
      return numeric_natural_psi(tail_from(member(source, "value")), lo, hi,
                                 tol);
    }
    fail("source kind must be 'spec' or 'tail'");
  }
  fail("unknown psi family '" + family + "'");
}

ordered_json psi_to(const GeneratingFunction& psi) {
  struct Visitor {
    const GeneratingFunction& host;
    ordered_json operator()(const PowerPsi& v) const {
      ordered_json j{{"family", "power_psi"}, {"C1", v.C1}, {"m", v.m}};
      j["support"] = support_to(host);
      return j;
    }
    ordered_json operator()(const NaturalStretchedExpPsi& v) const {
      ordered_json j{
          {"family", "natural_stretched_exp"}, {"c", v.c}, {"theta", v.theta}};
      j["support"] = support_to(host);
      return j;
    }
    ordered_json operator()(const TabulatedPsi& v) const {
      ordered_json j{{"family", "tabulated_psi"}};
      ordered_json grid = ordered_json::array();
      for (const auto& row : v.grid) {
        grid.push_back(ordered_json::array({row.first, row.second}));
      }
      j["grid"] = std::move(grid);
      return j;
    }
    ordered_json operator()(const NumericNaturalPsi& v) const {
      ordered_json source;
      if (v.spec_source) {
        source = {{"kind", "spec"}, {"value", spec_to(*v.spec_source)}};
      } else if (v.tail_source) {
        source = {{"kind", "tail"}, {"value", tail_to(*v.tail_source)}};
      } else {
        throw std::domain_error(
            "psi_to_json: numeric natural psi has no retained source");
      }
      ordered_json j{{"family", "natural"}};
      j["source"] = std::move(source);
      j["support"] = support_to(host);
      j["tol"] = v.tol;
      return j;
    }
  };
  return std::visit(Visitor{psi}, psi.node());
}

// ---------------------------------- CSV ------------------------------------

double parse_csv_number(const std::string& field) {
  std::size_t b = field.find_first_not_of(" \t");
  std::size_t e = field.find_last_not_of(" \t");
  if (b == std::string::npos) fail("empty CSV field");
  const char* first = field.data() + b;
  const char* last = field.data() + e + 1;
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    fail("malformed number in CSV: '" + field + "'");
  }
  return out;
}

std::vector<std::pair<double, double>> read_two_column_csv(
    std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line)) fail("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) fail("CSV header must be '" + header + "'");

  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos ||
        line.find(',', comma + 1) != std::string::npos) {
      fail("CSV rows must have exactly two columns");
    }
    rows.emplace_back(parse_csv_number(line.substr(0, comma)),
                      parse_csv_number(line.substr(comma + 1)));
  }
  if (rows.empty()) fail("CSV contains no data rows");
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_csv_extension(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

FunctionSpec function_spec_from_json(const std::string& text) {
  return spec_from(parse_root(text));
}

std::string function_spec_to_json(const FunctionSpec& spec) {
  return spec_to(spec).dump();
}

TailFunction tail_from_json(const std::string& text) {
  return tail_from(parse_root(text));
}

std::string tail_to_json(const TailFunction& tail) {
  return tail_to(tail).dump();
}

GeneratingFunction psi_from_json(const std::string& text) {
  return psi_from(parse_root(text));
}

std::string psi_to_json(const GeneratingFunction& psi) {
  return psi_to(psi).dump();
}

TailFunction tabulated_tail_from_csv(std::istream& in) {
  return TailFunction(TabulatedTail{read_two_column_csv(in, "t,T")});
}

void tabulated_tail_to_csv(std::ostream& out, const TailFunction& tail) {
  const auto* tab = std::get_if<TabulatedTail>(&tail.node());
  if (tab == nullptr) {
    throw std::domain_error(
        "tabulated_tail_to_csv: only tabulated tails have a CSV form");
  }
  out << "t,T\n";
  for (const auto& row : tab->grid) {
    out << format_number(row.first) << ',' << format_number(row.second) << '\n';
  }
}

GeneratingFunction tabulated_psi_from_csv(std::istream& in) {
  return GeneratingFunction(TabulatedPsi{read_two_column_csv(in, "p,psi")});
}

void psi_samples_to_csv(std::ostream& out,
                        const std::vector<std::pair<double, double>>& rows) {
  out << "p,psi\n";
  for (const auto& row : rows) {
    out << format_number(row.first) << ',' << format_number(row.second) << '\n';
  }
}

FunctionSpec load_spec_file(const std::string& path) {
  if (has_csv_extension(path)) {
    fail("function specifications are JSON-only (got a .csv path)");
  }
  return function_spec_from_json(read_file(path));
}

TailFunction load_tail_file(const std::string& path) {
  if (has_csv_extension(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open file: " + path);
    return tabulated_tail_from_csv(in);
  }
  return tail_from_json(read_file(path));
}

GeneratingFunction load_psi_file(const std::string& path) {
  if (has_csv_extension(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open file: " + path);
    return tabulated_psi_from_csv(in);
  }
  return psi_from_json(read_file(path));
}

}  // namespace glstail
