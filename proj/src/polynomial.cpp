#include "jitq/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "jitq/error.hpp"

namespace jitq {

std::size_t PseudoBooleanPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [vars, _] : terms_) d = std::max(d, vars.size());
  return d;
}

double PseudoBooleanPolynomial::offset() const { return coefficient({}); }

double PseudoBooleanPolynomial::coefficient(Monomial vars) const {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  const auto it = terms_.find(vars);
  return it == terms_.end() ? 0.0 : it->second;
}

double PseudoBooleanPolynomial::abs_sum() const {
  double sum = 0.0;
  for (const auto& [_, c] : terms_) sum += std::abs(c);
  return sum;
}

double PseudoBooleanPolynomial::max_abs_coefficient(bool include_offset) const {
  double m = 0.0;
  for (const auto& [vars, c] : terms_) {
    if (vars.empty() && !include_offset) continue;
    m = std::max(m, std::abs(c));
  }
  return m;
}

void PseudoBooleanPolynomial::add_term(Monomial vars, double coeff) {
  if (!std::isfinite(coeff)) {
    throw DomainError("polynomial coefficient is not finite");
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (!vars.empty() && vars.back() >= num_vars_) {
    throw DomainError(fmt::format("variable index {} out of range for {} variables", vars.back(),
                                  num_vars_));
  }
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(vars), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

VarIndex PseudoBooleanPolynomial::add_variables(std::size_t count) {
  const auto first = static_cast<VarIndex>(num_vars_);
  num_vars_ += count;
  return first;
}

double PseudoBooleanPolynomial::evaluate(const BitString& bits) const {
  if (bits.size() != num_vars_) {
    throw DomainError(fmt::format("assignment has {} bits, polynomial has {} variables",
                                  bits.size(), num_vars_));
  }
  double value = 0.0;
  for (const auto& [vars, c] : terms_) {
    if (std::all_of(vars.begin(), vars.end(), [&](VarIndex v) { return bits[v] != 0; })) {
      value += c;
    }
  }
  return value;
}

PseudoBooleanPolynomial& PseudoBooleanPolynomial::operator+=(const PseudoBooleanPolynomial& other) {
  num_vars_ = std::max(num_vars_, other.num_vars_);
  for (const auto& [vars, c] : other.terms_) add_term(vars, c);
  return *this;
}

PseudoBooleanPolynomial& PseudoBooleanPolynomial::operator*=(double factor) {
  if (factor == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [_, c] : terms_) c *= factor;
  return *this;
}

PseudoBooleanPolynomial operator*(const PseudoBooleanPolynomial& lhs,
                                  const PseudoBooleanPolynomial& rhs) {
  PseudoBooleanPolynomial out(std::max(lhs.num_vars(), rhs.num_vars()));
  for (const auto& [a, ca] : lhs.terms()) {
    for (const auto& [b, cb] : rhs.terms()) {
      Monomial merged;
      merged.reserve(a.size() + b.size());
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
      out.add_term(std::move(merged), ca * cb);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

VariableMap VariableMap::plain(std::size_t count) {
  return VariableMap(std::vector<VarInfo>(count, VarInfo::plain()));
}

std::size_t VariableMap::count(VarRole role) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [&](const VarInfo& v) { return v.role == role; }));
}

std::optional<VarIndex> VariableMap::find(const VarInfo& info) const {
  const auto it = std::find(entries_.begin(), entries_.end(), info);
  if (it == entries_.end()) return std::nullopt;
  return static_cast<VarIndex>(it - entries_.begin());
}

VarIndex VariableMap::push(const VarInfo& info) {
  entries_.push_back(info);
  return static_cast<VarIndex>(entries_.size() - 1);
}

// ---------------------------------------------------------------------------

PseudoBooleanPolynomial encoded_value(std::size_t num_vars, VarIndex first,
                                      const EncodingConfig& enc) {
  PseudoBooleanPolynomial p(num_vars);
  for (int j = enc.j_min; j <= enc.j_max; ++j) {
    p.add_term({first + static_cast<VarIndex>(j - enc.j_min)}, std::ldexp(1.0, j));
  }
  return p;
}

namespace {

struct Layout {
  std::size_t num_vars = 0;
  VariableMap variables;
};

Layout u_layout(const RouteScenario& scenario, const EncodingConfig& enc) {
  Layout layout;
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    for (int j = enc.j_min; j <= enc.j_max; ++j) {
      layout.variables.push(VarInfo::u_bit(static_cast<int>(i), j));
    }
  }
  layout.num_vars = layout.variables.size();
  return layout;
}

void append_w_layout(Layout& layout, const RouteScenario& scenario, const EncodingConfig& enc) {
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    for (int k = enc.j_min; k <= enc.j_max; ++k) {
      layout.variables.push(VarInfo::w_bit(static_cast<int>(i), k));
    }
  }
  layout.num_vars = layout.variables.size();
}

VarIndex first_u(std::size_t sector, const EncodingConfig& enc) {
  return static_cast<VarIndex>(sector * static_cast<std::size_t>(enc.bits()));
}

VarIndex first_w(std::size_t sector, std::size_t sectors, const EncodingConfig& enc_u,
                 const EncodingConfig& enc_w) {
  return static_cast<VarIndex>(sectors * static_cast<std::size_t>(enc_u.bits()) +
                               sector * static_cast<std::size_t>(enc_w.bits()));
}

// sum_i A_i s_i u_i + sum_i B_i s_i + alpha (sum_i s_i u_i - RTA)^2
PseudoBooleanPolynomial time_and_delay_terms(const RouteScenario& scenario,
                                             const EncodingConfig& enc, std::size_t num_vars) {
  PseudoBooleanPolynomial poly(num_vars);
  PseudoBooleanPolynomial lateness(num_vars);
  lateness.add_constant(-scenario.rta);
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    const auto& sector = scenario.sectors[i];
    const auto k = ground_speed_coefficients(sector);
    const auto u = encoded_value(num_vars, first_u(i, enc), enc);
    poly += u * (k.constant * sector.length);
    poly.add_constant(k.linear * sector.length);
    lateness += u * sector.length;
  }
  poly += (lateness * lateness) * scenario.alpha;
  return poly;
}

}  // namespace

BuiltProblem build_linear_qubo(const RouteScenario& scenario, const EncodingConfig& enc) {
  validate_scenario(scenario);
  enc.validate();
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    if (!scenario.sectors[i].fuel.is_linear()) {
      throw DomainError(fmt::format(
          "sector {} has a quadratic fuel term (c != 0); use the quadratic builder", i));
    }
  }
  auto layout = u_layout(scenario, enc);
  return {time_and_delay_terms(scenario, enc, layout.num_vars), std::move(layout.variables)};
}

PseudoBooleanPolynomial quadratic_objective(const RouteScenario& scenario,
                                            const EncodingConfig& enc_u,
                                            const EncodingConfig& enc_w) {
  const auto n = scenario.size();
  const auto num_vars = n * static_cast<std::size_t>(enc_u.bits() + enc_w.bits());
  auto poly = time_and_delay_terms(scenario, enc_u, num_vars);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& sector = scenario.sectors[i];
    const auto k = ground_speed_coefficients(sector);
    // Gamma s w stands in for Gamma s w^2 u on the penalty's zero set.
    poly += encoded_value(num_vars, first_w(i, n, enc_u, enc_w), enc_w) *
            (k.quadratic * sector.length);
  }
  return poly;
}

double default_penalty_weight(const RouteScenario& scenario, const EncodingConfig& enc_u,
                              const EncodingConfig& enc_w) {
  return 10.0 * quadratic_objective(scenario, enc_u, enc_w).abs_sum();
}

BuiltProblem build_quadratic_hobo(const RouteScenario& scenario, const EncodingConfig& enc_u,
                                  const EncodingConfig& enc_w, double penalty_weight) {
  validate_scenario(scenario);
  enc_u.validate();
  enc_w.validate();
  if (!(penalty_weight > 0.0) || !std::isfinite(penalty_weight)) {
    throw DomainError("penalty weight must be positive");
  }
  auto layout = u_layout(scenario, enc_u);
  append_w_layout(layout, scenario, enc_w);

  const auto n = scenario.size();
  auto poly = quadratic_objective(scenario, enc_u, enc_w);
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = encoded_value(layout.num_vars, first_u(i, enc_u), enc_u);
    const auto w = encoded_value(layout.num_vars, first_w(i, n, enc_u, enc_w), enc_w);
    auto residual = w * u;
    residual.add_constant(-1.0);
    poly += (residual * residual) * penalty_weight;
  }
  return {std::move(poly), std::move(layout.variables)};
}

double default_quadratization_weight(const PseudoBooleanPolynomial& pbp) {
  return 1.0 + pbp.abs_sum();
}

BuiltProblem quadratize(const PseudoBooleanPolynomial& pbp, double weight,
                        const VariableMap& variables) {
  if (!(weight > 0.0)) {
    throw DomainError("quadratization weight must be positive");
  }
  if (variables.size() != pbp.num_vars()) {
    throw DomainError(fmt::format("variable map has {} entries, polynomial has {} variables",
                                  variables.size(), pbp.num_vars()));
  }
  PseudoBooleanPolynomial out = pbp;
  VariableMap vars = variables;

  for (;;) {
    std::map<std::pair<VarIndex, VarIndex>, std::size_t> pair_counts;
    for (const auto& [mono, _] : out.terms()) {
      if (mono.size() < 3) continue;
      for (std::size_t a = 0; a < mono.size(); ++a) {
        for (std::size_t b = a + 1; b < mono.size(); ++b) {
          ++pair_counts[{mono[a], mono[b]}];
        }
      }
    }
    if (pair_counts.empty()) break;

    // Ascending map order plus strict comparison keeps the smallest pair on ties.
    auto best = pair_counts.begin();
    for (auto it = pair_counts.begin(); it != pair_counts.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    const auto [p, q] = best->first;

    const VarIndex y = out.add_variables(1);
    vars.push(VarInfo::aux(p, q));

    std::vector<std::pair<Monomial, double>> replaced;
    for (const auto& [mono, c] : out.terms()) {
      if (mono.size() >= 3 && std::binary_search(mono.begin(), mono.end(), p) &&
          std::binary_search(mono.begin(), mono.end(), q)) {
        replaced.emplace_back(mono, c);
      }
    }
    for (const auto& [mono, c] : replaced) {
      out.add_term(mono, -c);
      Monomial reduced;
      std::copy_if(mono.begin(), mono.end(), std::back_inserter(reduced),
                   [&](VarIndex v) { return v != p && v != q; });
      reduced.push_back(y);
      out.add_term(std::move(reduced), c);
    }

    out.add_term({p, q}, weight);
    out.add_term({p, y}, -2.0 * weight);
    out.add_term({q, y}, -2.0 * weight);
    out.add_term({y}, 3.0 * weight);
  }
  return {std::move(out), std::move(vars)};
}

BuiltProblem quadratize(const PseudoBooleanPolynomial& pbp, std::optional<double> weight) {
  return quadratize(pbp, weight.value_or(default_quadratization_weight(pbp)),
                    VariableMap::plain(pbp.num_vars()));
}

}  // namespace jitq
