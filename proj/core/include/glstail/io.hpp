#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "glstail/function_model.hpp"

namespace glstail {

// Structural problems in an input document (bad JSON, missing fields,
// unknown family names, malformed CSV).  Parameter-range violations keep
// throwing std::domain_error from the model constructors.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal that round-trips the double (up to 17 significant
// digits, '.' separator, locale-independent).
std::string format_number(double v);

FunctionSpec function_spec_from_json(const std::string& text);
std::string function_spec_to_json(const FunctionSpec& spec);

TailFunction tail_from_json(const std::string& text);
std::string tail_to_json(const TailFunction& tail);

GeneratingFunction psi_from_json(const std::string& text);
std::string psi_to_json(const GeneratingFunction& psi);

// CSV with header "t,T": one tabulated tail.
TailFunction tabulated_tail_from_csv(std::istream& in);
void tabulated_tail_to_csv(std::ostream& out, const TailFunction& tail);

// CSV with header "p,psi": one tabulated psi.
GeneratingFunction tabulated_psi_from_csv(std::istream& in);
void psi_samples_to_csv(std::ostream& out,
                        const std::vector<std::pair<double, double>>& rows);

// File loaders: ".csv" reads the tabulated formats, anything else is JSON.
FunctionSpec load_spec_file(const std::string& path);
TailFunction load_tail_file(const std::string& path);
GeneratingFunction load_psi_file(const std::string& path);

}  // namespace glstail
