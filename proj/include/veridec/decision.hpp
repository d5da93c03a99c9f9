#pragma once

// Scenarios, acts, utility specs, and the three evaluation functionals.
//
// A scenario bundles a finite state space, a menu of acts, a utility
// function, atomic beliefs, a family of verifiable events (a pi-system
// containing the full state set after intersection closure), and the model
// kind. Verification utility weights each state by the worst utility on the
// best verifiable event covering it; obfuscation utility is the mirrored
// min/max; expected utility is the usual benchmark.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "veridec/errors.hpp"
#include "veridec/events.hpp"
#include "veridec/set_function.hpp"

namespace veridec {

struct Act {
  std::string name;
  std::vector<double> payoff;  // one consequence value per state
};

enum class UtilityKind { kIdentity, kPower, kTable };

class UtilitySpec {
 public:
  static UtilitySpec identity() { return UtilitySpec(UtilityKind::kIdentity, 1.0, {}); }

  static UtilitySpec power(double exponent) {
    if (!(exponent > 0.0)) throw ValidationError("utility.exponent: must be > 0");
    return UtilitySpec(UtilityKind::kPower, exponent, {});
  }

  static UtilitySpec table(std::map<double, double> map) {
    if (map.size() < 1) throw ValidationError("utility.map: empty table");
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [x, u] : map) {
      if (u <= prev) throw ValidationError("utility.map: values must be strictly increasing");
      prev = u;
    }
    return UtilitySpec(UtilityKind::kTable, 0.0, std::move(map));
  }

  UtilityKind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  const std::map<double, double>& table_map() const { return table_; }

  double apply(double x) const {
    switch (kind_) {
      case UtilityKind::kIdentity:
        return x;
      case UtilityKind::kPower:
        if (x < 0.0) throw ValidationError("power utility needs non-negative consequences");
        return std::pow(x, exponent_);
      case UtilityKind::kTable: {
        const auto it = table_.find(x);
        if (it == table_.end()) {
          throw ValidationError("table utility: consequence " + std::to_string(x) +
                                " not covered");
        }
        return it->second;
      }
    }
    return 0.0;
  }

  // u^{-1}; for tables the utility value must be hit exactly (within tol).
  double inverse(double u, double tol = kValueTol) const {
    switch (kind_) {
      case UtilityKind::kIdentity:
        return u;
      case UtilityKind::kPower:
        if (u < 0.0) throw ValidationError("power utility not invertible below 0");
        return std::pow(u, 1.0 / exponent_);
      case UtilityKind::kTable: {
        for (const auto& [x, v] : table_) {
          if (std::fabs(v - u) <= tol) return x;
        }
        throw ValidationError("table utility not invertible at value " + std::to_string(u));
      }
    }
    return 0.0;
  }

  // The consequence z with u(z) = (u(x) + u(y)) / 2.
  double midpoint(double x, double y, double tol = kValueTol) const {
    const double target = 0.5 * (apply(x) + apply(y));
    if (kind_ == UtilityKind::kTable) {
      for (const auto& [c, v] : table_) {
        if (std::fabs(v - target) <= tol) return c;
      }
      throw ValidationError("midpoint not representable");
    }
    return inverse(target);
  }

 private:
  UtilitySpec(UtilityKind kind, double exponent, std::map<double, double> table)
      : kind_(kind), exponent_(exponent), table_(std::move(table)) {}

  UtilityKind kind_;
  double exponent_;
  std::map<double, double> table_;
};

enum class ModelKind { kVerification, kObfuscation, kExpectedUtility };

// ---------------------------------------------------------------------------
// Low-level evaluators on utility vectors. These are the raw functionals;
// Scenario methods wrap them after applying the utility spec. They are also
// what the identification and axiom machinery drives directly (binary acts
// are just 0/1 utility vectors).

// sum_s mu(s) * max over nonempty family members E containing s of
// (min over E of util). States with zero belief mass may be uncovered.
inline double verification_value(const EventFamily& family, std::span<const double> beliefs,
                                 std::span<const double> util) {
  double total = 0.0;
  for (std::size_t s = 0; s < beliefs.size(); ++s) {
    if (beliefs[s] == 0.0) continue;
    double best = -std::numeric_limits<double>::infinity();
    bool covered = false;
    for (Event e : family) {
      if (e.empty() || !e.contains(static_cast<int>(s))) continue;
      covered = true;
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < util.size(); ++t) {
        if (e.contains(static_cast<int>(t))) lo = std::min(lo, util[t]);
      }
      best = std::max(best, lo);
    }
    if (!covered) {
      throw ValidationError("state with positive mass not covered by any verifiable event");
    }
    total += beliefs[s] * best;
  }
  return total;
}

// Mirror image: sum_s mu(s) * min over covering E of (max over E of util).
inline double obfuscation_value(const EventFamily& family, std::span<const double> beliefs,
                                std::span<const double> util) {
  double total = 0.0;
  for (std::size_t s = 0; s < beliefs.size(); ++s) {
    if (beliefs[s] == 0.0) continue;
    double worst = std::numeric_limits<double>::infinity();
    bool covered = false;
    for (Event e : family) {
      if (e.empty() || !e.contains(static_cast<int>(s))) continue;
      covered = true;
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < util.size(); ++t) {
        if (e.contains(static_cast<int>(t))) hi = std::max(hi, util[t]);
      }
      worst = std::min(worst, hi);
    }
    if (!covered) {
      throw ValidationError("state with positive mass not covered by any verifiable event");
    }
    total += beliefs[s] * worst;
  }
  return total;
}

inline double expected_value(std::span<const double> beliefs, std::span<const double> util) {
  double total = 0.0;
  for (std::size_t s = 0; s < beliefs.size(); ++s) total += beliefs[s] * util[s];
  return total;
}

inline double model_value(ModelKind model, const EventFamily& family,
                          std::span<const double> beliefs, std::span<const double> util) {
  switch (model) {
    case ModelKind::kVerification:
      return verification_value(family, beliefs, util);
    case ModelKind::kObfuscation:
      return obfuscation_value(family, beliefs, util);
    case ModelKind::kExpectedUtility:
      return expected_value(beliefs, util);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

class Scenario {
 public:
  Scenario(StateSpace space, std::vector<Act> acts, UtilitySpec utility,
           std::vector<double> beliefs, EventFamily verifiable, ModelKind model,
           double tolerance = kValueTol)
      : space_(std::move(space)),
        acts_(std::move(acts)),
        utility_(std::move(utility)),
        beliefs_(std::move(beliefs)),
        verifiable_input_(std::move(verifiable)),
        verifiable_(close_under_intersection(verifiable_input_)),
        model_(model),
        tolerance_(tolerance) {
    validate();
  }

  const StateSpace& space() const { return space_; }
  const std::vector<Act>& acts() const { return acts_; }
  const UtilitySpec& utility() const { return utility_; }
  const std::vector<double>& beliefs() const { return beliefs_; }
  const EventFamily& verifiable_input() const { return verifiable_input_; }
  // The family actually used for evaluation: intersection closure of input.
  const EventFamily& verifiable() const { return verifiable_; }
  ModelKind model() const { return model_; }
  double tolerance() const { return tolerance_; }

  const Act& act(const std::string& name) const {
    for (const auto& a : acts_) {
      if (a.name == name) return a;
    }
    throw ValidationError("unknown act: " + name);
  }

  Scenario with_model(ModelKind model) const {
    return Scenario(space_, acts_, utility_, beliefs_, verifiable_input_, model, tolerance_);
  }

  Scenario with_verifiable(EventFamily family) const {
    return Scenario(space_, acts_, utility_, beliefs_, std::move(family), model_, tolerance_);
  }

  Scenario with_beliefs(std::vector<double> beliefs) const {
    return Scenario(space_, acts_, utility_, std::move(beliefs), verifiable_input_, model_,
                    tolerance_);
  }

  Scenario with_tolerance(double tolerance) const {
    return Scenario(space_, acts_, utility_, beliefs_, verifiable_input_, model_, tolerance);
  }

  std::vector<double> utility_vector(const Act& a) const {
    if (a.payoff.size() != static_cast<std::size_t>(space_.size())) {
      throw ValidationError("act " + a.name + ": payoff not defined for every state");
    }
    std::vector<double> u(a.payoff.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = utility_.apply(a.payoff[i]);
    return u;
  }

  double verification_utility(const Act& a) const {
    return verification_value(verifiable_, beliefs_, utility_vector(a));
  }

  double obfuscation_utility(const Act& a) const {
    return obfuscation_value(verifiable_, beliefs_, utility_vector(a));
  }

  double expected_utility(const Act& a) const {
    return expected_value(beliefs_, utility_vector(a));
  }

  double model_utility(const Act& a) const {
    return model_value(model_, verifiable_, beliefs_, utility_vector(a));
  }

  // Model weight of an event: the model utility of the indicator utility
  // vector 1_F. For binary acts this is the biseparable decision weight.
  double binary_weight(Event f) const {
    std::vector<double> indicator(space_.size(), 0.0);
    for (int i = 0; i < space_.size(); ++i) {
      if (f.contains(i)) indicator[i] = 1.0;
    }
    return model_value(model_, verifiable_, beliefs_, indicator);
  }

  // Value of the binary act (gamma on F, beta elsewhere) in biseparable
  // form. Requires u(gamma) >= u(beta); no silent complementation.
  double evaluate_binary(double gamma, Event f, double beta) const {
    const double ug = utility_.apply(gamma);
    const double ub = utility_.apply(beta);
    if (ug < ub) {
      throw ValidationError("evaluate_binary: u(gamma) < u(beta); swap the consequences");
    }
    const double w = binary_weight(f);
    return w * ug + (1.0 - w) * ub;
  }

  // The consequence whose utility is the midpoint of u(x) and u(y).
  double preference_average(double x, double y) const {
    return utility_.midpoint(x, y, tolerance_);
  }

  Act preference_average(const Act& a, const Act& b) const {
    Act mix;
    mix.name = "avg(" + a.name + "," + b.name + ")";
    mix.payoff.resize(space_.size());
    for (int i = 0; i < space_.size(); ++i) {
      mix.payoff[i] = utility_.midpoint(a.payoff[i], b.payoff[i], tolerance_);
    }
    return mix;
  }

  double certainty_equivalent(const Act& a) const {
    return utility_.inverse(model_utility(a), tolerance_);
  }

 private:
  void validate() const {
    const int n = space_.size();
    if (acts_.empty()) throw ValidationError("acts: at least one act required");
    std::vector<std::string> names;
    for (const auto& a : acts_) {
      if (a.name.empty()) throw ValidationError("acts: empty act name");
      names.push_back(a.name);
      if (a.payoff.size() != static_cast<std::size_t>(n)) {
        throw ValidationError("acts." + a.name + ": payoff not defined for every state");
      }
      for (double p : a.payoff) {
        if (!std::isfinite(p)) throw ValidationError("acts." + a.name + ": non-finite payoff");
        utility_.apply(p);  // table coverage / power domain
      }
    }
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
      throw ValidationError("acts: duplicate act name");
    }

    if (beliefs_.size() != static_cast<std::size_t>(n)) {
      throw ValidationError("beliefs: need one probability per state");
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (beliefs_[i] < 0.0) {
        throw ValidationError("beliefs." + space_.name(i) + ": negative probability");
      }
      sum += beliefs_[i];
    }
    if (std::fabs(sum - 1.0) > kValidityTol) {
      throw ValidationError("beliefs: probabilities sum to " + std::to_string(sum) +
                            ", expected 1");
    }

    for (Event e : verifiable_input_) {
      if (!space_.contains_event(e)) {
        throw ValidationError("verifiable: event references states outside the space");
      }
    }
    if (!is_pi_system_with_support(verifiable_, space_.full_event())) {
      throw ValidationError(
          "verifiable: intersection closure must contain the full state set; "
          "drop irrelevant states from the space instead");
    }
    if (!(tolerance_ > 0.0)) throw ValidationError("tolerance: must be > 0");
  }

  StateSpace space_;
  std::vector<Act> acts_;
  UtilitySpec utility_;
  std::vector<double> beliefs_;
  EventFamily verifiable_input_;
  EventFamily verifiable_;
  ModelKind model_;
  double tolerance_;
};

}  // namespace veridec
