#pragma once

#include <string>

#include "jitq/ising.hpp"
#include "jitq/polynomial.hpp"

namespace jitq {

// Problem documents (JSON):
//   {"num_vars": N,
//    "terms": [{"vars": [i, ...], "coeff": c}, ...],
//    "variable_map": [{"role": "u"|"w", "sector": i, "exponent": j}
//                     | {"role": "aux", "parents": [p, q]}
//                     | {"role": "x"}, ...]}
// Variable 0 is the least significant bit of a basis-state index. The empty
// "vars" list holds the constant offset.
//
// Ising documents replace "terms" by "h" (array), "J" (triples [i, j, c],
// i < j) and "offset"; the key "num_spins" replaces "num_vars".

std::string problem_to_json(const BuiltProblem& problem);
BuiltProblem problem_from_json(const std::string& text);

void export_problem(const BuiltProblem& problem, const std::string& path);
BuiltProblem import_problem(const std::string& path);

std::string ising_to_json(const IsingModel& model, const VariableMap& variables);
IsingModel ising_from_json(const std::string& text);

/// Writes text to path, throwing IoError on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace jitq
