#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jitq {

using BitString = std::vector<std::uint8_t>;

/// Fuel cost per unit time as a function of the speed relative to water:
/// C(v) = a + b*v + c*v^2 + e*perp^2, where perp is the sector's
/// perpendicular current.
struct FuelModel {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double e = 0.0;

  [[nodiscard]] bool is_linear() const { return c == 0.0; }
};

struct Sector {
  double length = 0.0;
  double parallel_flow = 0.0;  // positive values push the vessel forward
  double perp_flow = 0.0;
  FuelModel fuel;
};

/// Fuel coefficients re-expressed in ground speed w = v + parallel_flow:
/// C = constant + linear*w + quadratic*w^2.
struct GroundSpeedCoefficients {
  double constant = 0.0;
  double linear = 0.0;
  double quadratic = 0.0;
};

[[nodiscard]] GroundSpeedCoefficients ground_speed_coefficients(const Sector& sector);

/// Fuel spent crossing a sector at inverse ground speed u (C(v) * t).
/// At u = 0 only the linear coefficient's limit s * B survives.
[[nodiscard]] double sector_fuel(const Sector& sector, double inverse_speed);

/// Fixed-point range of a binary-encoded quantity: value = sum_j 2^j X_j for
/// j in [j_min, j_max].
struct EncodingConfig {
  int j_min = -5;
  int j_max = 0;

  [[nodiscard]] int bits() const { return j_max - j_min + 1; }
  /// Value represented by the integer code k (bit b of k is exponent j_min+b).
  [[nodiscard]] double value_of(std::uint64_t code) const;
  void validate() const;
};

/// Default range of the ground-speed encoding used by the quadratic builder.
inline constexpr EncodingConfig kDefaultSpeedEncoding{0, 4};

struct RouteScenario {
  std::vector<Sector> sectors;
  double rta = 0.0;
  double alpha = 0.0;
  EncodingConfig encoding;

  [[nodiscard]] std::size_t size() const { return sectors.size(); }
  [[nodiscard]] double total_length() const;
  [[nodiscard]] bool is_linear() const;
};

struct SectorPlan {
  double inverse_speed = 0.0;  // u = 1 / (v + dv)
  std::optional<double> ground_speed;  // w, undefined when u == 0
  std::optional<double> water_speed;   // v = w - dv
  double time = 0.0;
};

struct DecodedPlan {
  std::vector<SectorPlan> sectors;
  double arrival_time = 0.0;
  std::vector<std::size_t> infeasible_sectors;
};

struct CostBreakdown {
  std::vector<double> fuel_per_sector;
  double fuel_total = 0.0;
  double delay_cost = 0.0;
  double total = 0.0;
};

/// Throws DomainError naming the first violated invariant.
const RouteScenario& validate_scenario(const RouteScenario& scenario);

/// Decodes sector-major u-bits (exponent ascending within a sector).
/// Extra trailing bits are not allowed; use decode_prefix for HOBO assignments.
DecodedPlan decode(const BitString& bits, const RouteScenario& scenario, const EncodingConfig& enc);

/// Decodes the first n*B entries of a longer assignment.
DecodedPlan decode_prefix(const BitString& bits, const RouteScenario& scenario,
                          const EncodingConfig& enc);

/// Builds a plan directly from per-sector inverse speeds.
DecodedPlan plan_from_inverse_speeds(const std::vector<double>& inverse_speeds,
                                     const RouteScenario& scenario);

CostBreakdown scenario_cost(const DecodedPlan& plan, const RouteScenario& scenario);

/// Residual scenario after `completed` sectors were sailed in `elapsed` time
/// and the destination requested a new arrival time.
RouteScenario replan(const RouteScenario& scenario, std::size_t completed, double elapsed,
                     double new_rta);

RouteScenario parse_scenario(const std::string& json_text);
RouteScenario load_scenario(const std::string& path);
std::string scenario_to_json(const RouteScenario& scenario);

/// FNV-1a digest of the canonical JSON form, as 16 hex digits.
std::string scenario_digest(const RouteScenario& scenario);

}  // namespace jitq
