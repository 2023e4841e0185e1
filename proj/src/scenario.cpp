#include "jitq/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "jitq/error.hpp"

namespace jitq {

using nlohmann::json;

GroundSpeedCoefficients ground_speed_coefficients(const Sector& sector) {
  const auto& f = sector.fuel;
  const double dv = sector.parallel_flow;
  return {
      .constant = f.a - f.b * dv + f.c * dv * dv + f.e * sector.perp_flow * sector.perp_flow,
      .linear = f.b - 2.0 * f.c * dv,
      .quadratic = f.c,
  };
}

double sector_fuel(const Sector& sector, double inverse_speed) {
  const auto k = ground_speed_coefficients(sector);
  // s * (A*u + B*(w*u) + G*w*(w*u)) with w*u = 1 whenever u > 0.
  double fuel = k.constant * sector.length * inverse_speed + k.linear * sector.length;
  if (inverse_speed > 0.0) {
    fuel += k.quadratic * sector.length / inverse_speed;
  }
  return fuel;
}

double EncodingConfig::value_of(std::uint64_t code) const {
  return std::ldexp(static_cast<double>(code), j_min);
}

void EncodingConfig::validate() const {
  if (j_min > j_max) {
    throw DomainError(fmt::format("encoding range is empty (j_min {} > j_max {})", j_min, j_max));
  }
  if (bits() > 16) {
    throw DomainError(fmt::format("encoding uses {} bits, at most 16 are supported", bits()));
  }
}

double RouteScenario::total_length() const {
  return std::accumulate(sectors.begin(), sectors.end(), 0.0,
                         [](double acc, const Sector& s) { return acc + s.length; });
}

bool RouteScenario::is_linear() const {
  return std::all_of(sectors.begin(), sectors.end(),
                     [](const Sector& s) { return s.fuel.is_linear(); });
}

const RouteScenario& validate_scenario(const RouteScenario& scenario) {
  if (scenario.sectors.empty()) {
    throw DomainError("scenario has no sectors");
  }
  for (std::size_t i = 0; i < scenario.sectors.size(); ++i) {
    const auto& s = scenario.sectors[i];
    if (!std::isfinite(s.length)) {
      throw DomainError(fmt::format("sector {}: non-finite sector length", i));
    }
    if (s.length <= 0.0) {
      throw DomainError(fmt::format("sector {}: non-positive sector length", i));
    }
    if (!std::isfinite(s.parallel_flow) || !std::isfinite(s.perp_flow)) {
      throw DomainError(fmt::format("sector {}: non-finite flow value", i));
    }
    const auto& f = s.fuel;
    if (!std::isfinite(f.a) || !std::isfinite(f.b) || !std::isfinite(f.c) || !std::isfinite(f.e)) {
      throw DomainError(fmt::format("sector {}: non-finite fuel coefficient", i));
    }
    if (f.a < 0.0 || f.c < 0.0 || f.e < 0.0) {
      throw DomainError(fmt::format("sector {}: negative fuel coefficient (a, c and e must be >= 0)", i));
    }
  }
  if (!std::isfinite(scenario.rta)) {
    throw DomainError("non-finite requested time of arrival");
  }
  if (scenario.rta < 0.0) {
    throw DomainError("negative requested time of arrival");
  }
  if (!std::isfinite(scenario.alpha)) {
    throw DomainError("non-finite delay weight");
  }
  if (scenario.alpha < 0.0) {
    throw DomainError("negative delay weight");
  }
  scenario.encoding.validate();
  return scenario;
}

namespace {

std::vector<double> inverse_speeds_from_bits(const BitString& bits, std::size_t sectors,
                                             const EncodingConfig& enc) {
  const auto width = static_cast<std::size_t>(enc.bits());
  std::vector<double> u(sectors, 0.0);
  for (std::size_t i = 0; i < sectors; ++i) {
    std::uint64_t code = 0;
    for (std::size_t b = 0; b < width; ++b) {
      const auto bit = bits[i * width + b];
      if (bit > 1) {
        throw DomainError(fmt::format("bit value {} is not binary", static_cast<int>(bit)));
      }
      code |= static_cast<std::uint64_t>(bit) << b;
    }
    u[i] = enc.value_of(code);
  }
  return u;
}

}  // namespace

DecodedPlan plan_from_inverse_speeds(const std::vector<double>& inverse_speeds,
                                     const RouteScenario& scenario) {
  if (inverse_speeds.size() != scenario.size()) {
    throw DomainError(fmt::format("expected {} inverse speeds, got {}", scenario.size(),
                                  inverse_speeds.size()));
  }
  DecodedPlan plan;
  plan.sectors.reserve(scenario.size());
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    const auto& sector = scenario.sectors[i];
    SectorPlan sp;
    sp.inverse_speed = inverse_speeds[i];
    sp.time = sector.length * sp.inverse_speed;
    if (sp.inverse_speed > 0.0) {
      sp.ground_speed = 1.0 / sp.inverse_speed;
      sp.water_speed = *sp.ground_speed - sector.parallel_flow;
    } else {
      plan.infeasible_sectors.push_back(i);
    }
    plan.arrival_time += sp.time;
    plan.sectors.push_back(sp);
  }
  return plan;
}

DecodedPlan decode(const BitString& bits, const RouteScenario& scenario, const EncodingConfig& enc) {
  const auto expected = scenario.size() * static_cast<std::size_t>(enc.bits());
  if (bits.size() != expected) {
    throw DomainError(fmt::format("wrong bit count: expected {}, got {}", expected, bits.size()));
  }
  return plan_from_inverse_speeds(inverse_speeds_from_bits(bits, scenario.size(), enc), scenario);
}

DecodedPlan decode_prefix(const BitString& bits, const RouteScenario& scenario,
                          const EncodingConfig& enc) {
  const auto expected = scenario.size() * static_cast<std::size_t>(enc.bits());
  if (bits.size() < expected) {
    throw DomainError(fmt::format("wrong bit count: expected at least {}, got {}", expected,
                                  bits.size()));
  }
  return plan_from_inverse_speeds(inverse_speeds_from_bits(bits, scenario.size(), enc), scenario);
}

CostBreakdown scenario_cost(const DecodedPlan& plan, const RouteScenario& scenario) {
  if (plan.sectors.size() != scenario.size()) {
    throw DomainError("plan and scenario have different sector counts");
  }
  CostBreakdown cost;
  cost.fuel_per_sector.reserve(scenario.size());
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    const auto& sector = scenario.sectors[i];
    const auto& sp = plan.sectors[i];
    const double fuel = sector_fuel(sector, sp.inverse_speed);
    cost.fuel_per_sector.push_back(fuel);
    cost.fuel_total += fuel;
  }
  const double lateness = plan.arrival_time - scenario.rta;
  cost.delay_cost = scenario.alpha * lateness * lateness;
  cost.total = cost.fuel_total + cost.delay_cost;
  return cost;
}

RouteScenario replan(const RouteScenario& scenario, std::size_t completed, double elapsed,
                     double new_rta) {
  if (completed >= scenario.size()) {
    throw DomainError(fmt::format("cannot replan after {} of {} sectors: no sectors remain",
                                  completed, scenario.size()));
  }
  if (!(elapsed >= 0.0)) {
    throw DomainError("elapsed time must be non-negative");
  }
  if (new_rta < elapsed) {
    throw DomainError(fmt::format("new arrival time {} lies before the elapsed time {}", new_rta,
                                  elapsed));
  }
  RouteScenario rest = scenario;
  rest.sectors.assign(scenario.sectors.begin() + static_cast<std::ptrdiff_t>(completed),
                      scenario.sectors.end());
  rest.rta = new_rta - elapsed;
  return rest;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!obj.is_object()) {
    throw DomainError(fmt::format("{}: expected an object", where));
  }
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw DomainError(fmt::format("{}: unknown field '{}'", where, key));
    }
  }
}

double number_field(const json& obj, const char* key, const std::string& where,
                    std::optional<double> fallback = std::nullopt) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw DomainError(fmt::format("{}: missing field '{}'", where, key));
  }
  if (!it->is_number()) {
    throw DomainError(fmt::format("{}: field '{}' must be a number", where, key));
  }
  return it->get<double>();
}

int integer_field(const json& obj, const char* key, const std::string& where, int fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) {
    throw DomainError(fmt::format("{}: field '{}' must be an integer", where, key));
  }
  return it->get<int>();
}

}  // namespace

RouteScenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DomainError(fmt::format("malformed scenario document: {}", e.what()));
  }
  reject_unknown(doc, {"sectors", "rta", "alpha", "encoding"}, "scenario");
  RouteScenario scenario;
  const auto sectors = doc.find("sectors");
  if (sectors == doc.end() || !sectors->is_array()) {
    throw DomainError("scenario: 'sectors' must be an array");
  }
  for (std::size_t i = 0; i < sectors->size(); ++i) {
    const auto& js = (*sectors)[i];
    const auto where = fmt::format("sector {}", i);
    reject_unknown(js, {"length", "parallel_flow", "perp_flow", "fuel"}, where);
    Sector s;
    s.length = number_field(js, "length", where);
    s.parallel_flow = number_field(js, "parallel_flow", where);
    s.perp_flow = number_field(js, "perp_flow", where, 0.0);
    const auto fuel = js.find("fuel");
    if (fuel == js.end()) {
      throw DomainError(fmt::format("{}: missing field 'fuel'", where));
    }
    const auto fuel_where = where + " fuel";
    reject_unknown(*fuel, {"a", "b", "c", "e"}, fuel_where);
    s.fuel.a = number_field(*fuel, "a", fuel_where);
    s.fuel.b = number_field(*fuel, "b", fuel_where);
    s.fuel.c = number_field(*fuel, "c", fuel_where, 0.0);
    s.fuel.e = number_field(*fuel, "e", fuel_where, 0.0);
    scenario.sectors.push_back(s);
  }
  scenario.rta = number_field(doc, "rta", "scenario");
  scenario.alpha = number_field(doc, "alpha", "scenario");
  if (const auto enc = doc.find("encoding"); enc != doc.end()) {
    reject_unknown(*enc, {"j_min", "j_max"}, "encoding");
    scenario.encoding.j_min = integer_field(*enc, "j_min", "encoding", -5);
    scenario.encoding.j_max = integer_field(*enc, "j_max", "encoding", 0);
  }
  return scenario;
}

RouteScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(fmt::format("cannot read scenario file '{}'", path));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const RouteScenario& scenario) {
  json doc;
  doc["sectors"] = json::array();
  for (const auto& s : scenario.sectors) {
    doc["sectors"].push_back({
        {"length", s.length},
        {"parallel_flow", s.parallel_flow},
        {"perp_flow", s.perp_flow},
        {"fuel", {{"a", s.fuel.a}, {"b", s.fuel.b}, {"c", s.fuel.c}, {"e", s.fuel.e}}},
    });
  }
  doc["rta"] = scenario.rta;
  doc["alpha"] = scenario.alpha;
  doc["encoding"] = {{"j_min", scenario.encoding.j_min}, {"j_max", scenario.encoding.j_max}};
  return doc.dump(2);
}

std::string scenario_digest(const RouteScenario& scenario) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : scenario_to_json(scenario)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", hash);
}

}  // namespace jitq
