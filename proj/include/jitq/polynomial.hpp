#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jitq/scenario.hpp"

namespace jitq {

using VarIndex = std::uint32_t;
using Monomial = std::vector<VarIndex>;  // sorted, duplicate-free

/// Multilinear polynomial over binary variables. The empty monomial carries
/// the constant offset. Terms are stored canonically: sorted indices, no
/// repeated index (x^2 = x), no zero coefficients.
class PseudoBooleanPolynomial {
 public:
  using TermMap = std::map<Monomial, double>;

  PseudoBooleanPolynomial() = default;
  explicit PseudoBooleanPolynomial(std::size_t num_vars) : num_vars_(num_vars) {}

  [[nodiscard]] std::size_t num_vars() const { return num_vars_; }
  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] std::size_t degree() const;
  [[nodiscard]] double offset() const;
  [[nodiscard]] double coefficient(Monomial vars) const;
  [[nodiscard]] bool empty() const { return terms_.empty(); }
  /// Sum of absolute coefficients, offset included.
  [[nodiscard]] double abs_sum() const;
  [[nodiscard]] double max_abs_coefficient(bool include_offset = false) const;

  /// Adds coeff * prod(vars). Indices are sorted and de-duplicated; a term
  /// that cancels to exactly zero is erased.
  void add_term(Monomial vars, double coeff);
  void add_constant(double c) { add_term({}, c); }

  /// Grows the variable count; returns the index of the first new variable.
  VarIndex add_variables(std::size_t count);

  [[nodiscard]] double evaluate(const BitString& bits) const;

  PseudoBooleanPolynomial& operator+=(const PseudoBooleanPolynomial& other);
  PseudoBooleanPolynomial& operator*=(double factor);
  friend PseudoBooleanPolynomial operator+(PseudoBooleanPolynomial lhs,
                                           const PseudoBooleanPolynomial& rhs) {
    return lhs += rhs;
  }
  friend PseudoBooleanPolynomial operator*(PseudoBooleanPolynomial lhs, double factor) {
    return lhs *= factor;
  }
  /// Multilinear product; the result spans max(num_vars) variables.
  friend PseudoBooleanPolynomial operator*(const PseudoBooleanPolynomial& lhs,
                                           const PseudoBooleanPolynomial& rhs);

  friend bool operator==(const PseudoBooleanPolynomial&, const PseudoBooleanPolynomial&) = default;

 private:
  std::size_t num_vars_ = 0;
  TermMap terms_;
};

enum class VarRole { U, W, Aux, Plain };

/// Semantic role of one flat variable index.
struct VarInfo {
  VarRole role = VarRole::Plain;
  int sector = 0;
  int exponent = 0;
  std::pair<VarIndex, VarIndex> parents{0, 0};  // Aux only

  static VarInfo u_bit(int sector, int exponent) { return {VarRole::U, sector, exponent, {}}; }
  static VarInfo w_bit(int sector, int exponent) { return {VarRole::W, sector, exponent, {}}; }
  static VarInfo aux(VarIndex p, VarIndex q) { return {VarRole::Aux, 0, 0, {p, q}}; }
  static VarInfo plain() { return {}; }

  friend bool operator==(const VarInfo&, const VarInfo&) = default;
};

/// Flat index -> role. Order: u-bits (sector-major, exponent ascending), then
/// w-bits in the same order, then aux variables in creation order.
class VariableMap {
 public:
  VariableMap() = default;
  explicit VariableMap(std::vector<VarInfo> entries) : entries_(std::move(entries)) {}

  /// Map in which every index is an unlabelled variable.
  static VariableMap plain(std::size_t count);

  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const VarInfo& operator[](std::size_t i) const { return entries_.at(i); }
  [[nodiscard]] const std::vector<VarInfo>& entries() const { return entries_; }
  [[nodiscard]] std::size_t count(VarRole role) const;
  [[nodiscard]] std::optional<VarIndex> find(const VarInfo& info) const;

  VarIndex push(const VarInfo& info);

  friend bool operator==(const VariableMap&, const VariableMap&) = default;

 private:
  std::vector<VarInfo> entries_;
};

struct BuiltProblem {
  PseudoBooleanPolynomial polynomial;
  VariableMap variables;
};

/// Linear polynomial sum_j 2^j x_{first + j - j_min} for one encoded quantity.
PseudoBooleanPolynomial encoded_value(std::size_t num_vars, VarIndex first,
                                      const EncodingConfig& enc);

/// QUBO of the linear-fuel cost model over n*B inverse-speed bits:
///   sum_i A_i s_i u_i + sum_i B_i s_i + alpha (sum_i s_i u_i - RTA)^2.
/// Requires c = 0 on every sector.
BuiltProblem build_linear_qubo(const RouteScenario& scenario, const EncodingConfig& enc);

/// Higher-order polynomial of the quadratic-fuel model. Adds ground-speed bits
/// w_i and the penalty P (w_i u_i - 1)^2 per sector; degree <= 4.
BuiltProblem build_quadratic_hobo(const RouteScenario& scenario, const EncodingConfig& enc_u,
                                  const EncodingConfig& enc_w, double penalty_weight);

/// The HOBO objective without the penalty terms (used for the default weight).
PseudoBooleanPolynomial quadratic_objective(const RouteScenario& scenario,
                                            const EncodingConfig& enc_u,
                                            const EncodingConfig& enc_w);

/// 10 * sum of |objective coefficients|.
double default_penalty_weight(const RouteScenario& scenario, const EncodingConfig& enc_u,
                              const EncodingConfig& enc_w);

/// 1 + sum of |coefficients|.
double default_quadratization_weight(const PseudoBooleanPolynomial& pbp);

/// Rosenberg reduction to degree <= 2. Repeatedly replaces the pair occurring
/// in most degree >= 3 terms (ties: lexicographically smallest) by an aux
/// variable y and adds M (x_p x_q - 2 x_p y - 2 x_q y + 3 y).
BuiltProblem quadratize(const PseudoBooleanPolynomial& pbp, double weight,
                        const VariableMap& variables);
BuiltProblem quadratize(const PseudoBooleanPolynomial& pbp,
                        std::optional<double> weight = std::nullopt);

}  // namespace jitq
