#include "jitq/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "jitq/error.hpp"

namespace jitq {

using nlohmann::json;

namespace {

const char* role_name(VarRole role) {
  switch (role) {
    case VarRole::U: return "u";
    case VarRole::W: return "w";
    case VarRole::Aux: return "aux";
    case VarRole::Plain: return "x";
  }
  return "x";
}

json variable_map_to_json(const VariableMap& variables) {
  json out = json::array();
  for (const auto& v : variables.entries()) {
    json entry = {{"role", role_name(v.role)}};
    if (v.role == VarRole::U || v.role == VarRole::W) {
      entry["sector"] = v.sector;
      entry["exponent"] = v.exponent;
    } else if (v.role == VarRole::Aux) {
      entry["parents"] = {v.parents.first, v.parents.second};
    }
    out.push_back(std::move(entry));
  }
  return out;
}

VariableMap variable_map_from_json(const json& doc, std::size_t num_vars) {
  const auto it = doc.find("variable_map");
  if (it == doc.end()) return VariableMap::plain(num_vars);
  if (!it->is_array()) throw DomainError("'variable_map' must be an array");
  if (it->size() != num_vars) {
    throw DomainError(fmt::format("variable_map has {} entries, expected {}", it->size(), num_vars));
  }
  VariableMap vars;
  for (const auto& e : *it) {
    if (!e.is_object() || !e.contains("role") || !e["role"].is_string()) {
      throw DomainError("variable_map entry needs a string 'role'");
    }
    const auto role = e["role"].get<std::string>();
    if (role == "u" || role == "w") {
      if (!e.contains("sector") || !e.contains("exponent") || !e["sector"].is_number_integer() ||
          !e["exponent"].is_number_integer()) {
        throw DomainError(fmt::format("variable_map '{}' entry needs integer sector and exponent", role));
      }
      const int sector = e["sector"].get<int>();
      const int exponent = e["exponent"].get<int>();
      vars.push(role == "u" ? VarInfo::u_bit(sector, exponent) : VarInfo::w_bit(sector, exponent));
    } else if (role == "aux") {
      const auto parents = e.find("parents");
      if (parents == e.end() || !parents->is_array() || parents->size() != 2) {
        throw DomainError("variable_map 'aux' entry needs two parents");
      }
      const auto p = (*parents)[0].get<VarIndex>();
      const auto q = (*parents)[1].get<VarIndex>();
      if (p >= num_vars || q >= num_vars) {
        throw DomainError("aux parent index out of range");
      }
      vars.push(VarInfo::aux(p, q));
    } else if (role == "x") {
      vars.push(VarInfo::plain());
    } else {
      throw DomainError(fmt::format("unknown variable role '{}'", role));
    }
  }
  return vars;
}

std::size_t count_field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_number_unsigned()) {
    throw DomainError(fmt::format("'{}' must be a non-negative integer", key));
  }
  return it->get<std::size_t>();
}

json parse_document(const std::string& text) {
  try {
    auto doc = json::parse(text);
    if (!doc.is_object()) throw DomainError("problem document must be a JSON object");
    return doc;
  } catch (const json::exception& e) {
    throw DomainError(fmt::format("malformed problem document: {}", e.what()));
  }
}

}  // namespace

std::string problem_to_json(const BuiltProblem& problem) {
  const auto& pbp = problem.polynomial;
  json terms = json::array();
  for (const auto& [vars, c] : pbp.terms()) {
    terms.push_back({{"vars", vars}, {"coeff", c}});
  }
  json doc = {
      {"num_vars", pbp.num_vars()},
      {"terms", std::move(terms)},
      {"variable_map", variable_map_to_json(problem.variables)},
  };
  return doc.dump(2);
}

BuiltProblem problem_from_json(const std::string& text) {
  const auto doc = parse_document(text);
  try {
    const auto num_vars = count_field(doc, "num_vars");
    const auto terms = doc.find("terms");
    if (terms == doc.end() || !terms->is_array()) throw DomainError("'terms' must be an array");

    PseudoBooleanPolynomial pbp(num_vars);
    std::set<Monomial> seen;
    for (const auto& t : *terms) {
      if (!t.is_object() || !t.contains("vars") || !t.contains("coeff") || !t["vars"].is_array() ||
          !t["coeff"].is_number()) {
        throw DomainError("each term needs a 'vars' array and a numeric 'coeff'");
      }
      auto vars = t["vars"].get<Monomial>();
      for (std::size_t k = 0; k < vars.size(); ++k) {
        if (vars[k] >= num_vars) {
          throw DomainError(fmt::format("term index {} out of range for {} variables", vars[k], num_vars));
        }
        if (k > 0 && vars[k] <= vars[k - 1]) {
          throw DomainError("term 'vars' must be strictly ascending");
        }
      }
      if (!seen.insert(vars).second) {
        throw DomainError(fmt::format("duplicate term [{}]", fmt::join(vars, ", ")));
      }
      pbp.add_term(std::move(vars), t["coeff"].get<double>());
    }
    return {std::move(pbp), variable_map_from_json(doc, num_vars)};
  } catch (const json::exception& e) {
    throw DomainError(fmt::format("malformed problem document: {}", e.what()));
  }
}

void export_problem(const BuiltProblem& problem, const std::string& path) {
  write_text_file(path, problem_to_json(problem) + "\n");
}

BuiltProblem import_problem(const std::string& path) {
  return problem_from_json(read_text_file(path));
}

std::string ising_to_json(const IsingModel& model, const VariableMap& variables) {
  json couplings = json::array();
  for (const auto& [ij, c] : model.couplings) {
    couplings.push_back({ij.first, ij.second, c});
  }
  json doc = {
      {"num_spins", model.num_spins},
      {"h", model.h},
      {"J", std::move(couplings)},
      {"offset", model.offset},
      {"variable_map", variable_map_to_json(variables)},
  };
  return doc.dump(2);
}

IsingModel ising_from_json(const std::string& text) {
  const auto doc = parse_document(text);
  try {
    IsingModel model;
    model.num_spins = count_field(doc, "num_spins");
    model.h = doc.at("h").get<std::vector<double>>();
    if (model.h.size() != model.num_spins) {
      throw DomainError("'h' length differs from num_spins");
    }
    model.offset = doc.at("offset").get<double>();
    for (const auto& triple : doc.at("J")) {
      if (!triple.is_array() || triple.size() != 3) {
        throw DomainError("'J' entries must be [i, j, c] triples");
      }
      const auto i = triple[0].get<VarIndex>();
      const auto j = triple[1].get<VarIndex>();
      if (!(i < j) || j >= model.num_spins) {
        throw DomainError(fmt::format("coupling ({}, {}) needs i < j < num_spins", i, j));
      }
      if (!model.couplings.emplace(std::pair{i, j}, triple[2].get<double>()).second) {
        throw DomainError(fmt::format("duplicate coupling ({}, {})", i, j));
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw DomainError(fmt::format("malformed Ising document: {}", e.what()));
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  out << text;
  if (!out) throw IoError(fmt::format("failed writing '{}'", path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace jitq
