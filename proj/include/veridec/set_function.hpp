#pragma once

// Set functions on the subset lattice: capacities, probability measures,
// zeta/Mobius transforms, modularity classification, Choquet integration.
//
// Values live in dense arrays of length 2^n indexed by event bitmask; the
// fast transforms are the usual in-place passes over bit dimensions.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "veridec/errors.hpp"
#include "veridec/events.hpp"

namespace veridec {

// Absolute tolerance for value comparisons (Mobius positivity, modularity,
// Choquet agreement). Scenario files may override their own copy.
inline constexpr double kValueTol = 1e-9;
// Tighter tolerance for validity checks (grounded / normalized / monotone,
// belief normalization).
inline constexpr double kValidityTol = 1e-12;

class SetFunction {
 public:
  SetFunction(StateSpace space, std::vector<double> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_.num_events()) {
      throw ValidationError("set function needs one value per event (2^n)");
    }
  }

  static SetFunction zeros(const StateSpace& space) {
    return SetFunction(space, std::vector<double>(space.num_events(), 0.0));
  }

  const StateSpace& space() const { return space_; }
  double operator[](Event e) const { return values_[e.bits]; }
  double& operator[](Event e) { return values_[e.bits]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool is_grounded(double tol = kValidityTol) const { return std::fabs(values_[0]) <= tol; }

  bool is_normalized(double tol = kValidityTol) const {
    return std::fabs(values_[space_.full_mask()] - 1.0) <= tol;
  }

  bool is_monotone(double tol = kValidityTol) const {
    const std::uint32_t m = space_.num_events();
    for (std::uint32_t s = 0; s < m; ++s) {
      for (int i = 0; i < space_.size(); ++i) {
        if (s & (1u << i)) continue;
        if (values_[s] > values_[s | (1u << i)] + tol) return false;
      }
    }
    return true;
  }

  bool is_capacity(double tol = kValidityTol) const {
    return is_grounded(tol) && is_normalized(tol) && is_monotone(tol);
  }

  bool is_additive(double tol = kValueTol) const {
    const std::uint32_t m = space_.num_events();
    for (std::uint32_t s = 0; s < m; ++s) {
      double atoms = 0.0;
      for (int i = 0; i < space_.size(); ++i) {
        if (s & (1u << i)) atoms += values_[1u << i];
      }
      if (std::fabs(values_[s] - atoms) > tol) return false;
    }
    return true;
  }

 private:
  StateSpace space_;
  std::vector<double> values_;
};

class MobiusVector {
 public:
  MobiusVector(StateSpace space, std::vector<double> mass)
      : space_(std::move(space)), mass_(std::move(mass)) {
    if (mass_.size() != space_.num_events()) {
      throw ValidationError("Mobius vector needs one mass per event (2^n)");
    }
  }

  static MobiusVector zeros(const StateSpace& space) {
    return MobiusVector(space, std::vector<double>(space.num_events(), 0.0));
  }

  const StateSpace& space() const { return space_; }
  double operator[](Event e) const { return mass_[e.bits]; }
  double& operator[](Event e) { return mass_[e.bits]; }
  const std::vector<double>& mass() const { return mass_; }

  // Union of events carrying mass above `tol`; states outside are the
  // irrelevant ones of the associated capacity.
  Event positive_support(double tol = kValueTol) const {
    std::uint32_t bits = 0;
    for (std::uint32_t s = 0; s < mass_.size(); ++s) {
      if (mass_[s] > tol) bits |= s;
    }
    return {bits};
  }

 private:
  StateSpace space_;
  std::vector<double> mass_;
};

// f(E) = sum of mass over subsets of E. Inverse of mobius_transform.
inline SetFunction zeta_transform(const MobiusVector& m) {
  std::vector<double> v = m.mass();
  const std::uint32_t size = static_cast<std::uint32_t>(v.size());
  for (std::uint32_t i = 1; i < size; i <<= 1) {
    for (std::uint32_t s = 0; s < size; ++s) {
      if (s & i) v[s] += v[s ^ i];
    }
  }
  return SetFunction(m.space(), std::move(v));
}

// Exact lattice inverse of zeta_transform.
inline MobiusVector mobius_transform(const SetFunction& f) {
  std::vector<double> v = f.values();
  const std::uint32_t size = static_cast<std::uint32_t>(v.size());
  for (std::uint32_t i = 1; i < size; i <<= 1) {
    for (std::uint32_t s = 0; s < size; ++s) {
      if (s & i) v[s] -= v[s ^ i];
    }
  }
  return MobiusVector(f.space(), std::move(v));
}

enum class Modularity { kSupermodular, kSubmodular, kModular, kNeither };

// Exhaustive check of f(E|F) + f(E&F) against f(E) + f(F) over all pairs
// drawn from `domain`.
inline Modularity classify_modularity(const SetFunction& f, const EventFamily& domain,
                                      double tol = kValueTol) {
  bool super = true;
  bool sub = true;
  const auto& m = domain.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!f.space().contains_event(m[i])) {
      throw ValidationError("modularity domain event outside the space");
    }
    for (std::size_t j = i; j < m.size(); ++j) {
      const double lhs = f[m[i] | m[j]] + f[m[i] & m[j]];
      const double rhs = f[m[i]] + f[m[j]];
      if (lhs < rhs - tol) super = false;
      if (lhs > rhs + tol) sub = false;
    }
  }
  if (super && sub) return Modularity::kModular;
  if (super) return Modularity::kSupermodular;
  if (sub) return Modularity::kSubmodular;
  return Modularity::kNeither;
}

// Choquet integral by decreasing level sets. No capacity validation; also
// meaningful as a diagnostic for non-monotone set functions.
inline double choquet_sort_value(const SetFunction& f, std::span<const double> payoff) {
  const int n = f.space().size();
  if (static_cast<int>(payoff.size()) != n) {
    throw ValidationError("payoff vector length does not match the space");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return payoff[a] != payoff[b] ? payoff[a] > payoff[b] : a < b;
  });
  double total = 0.0;
  std::uint32_t level = 0;
  for (int i = 0; i < n; ++i) {
    const double before = f[{level}];
    level |= 1u << order[i];
    total += payoff[order[i]] * (f[{level}] - before);
  }
  return total;
}

// Mobius route: sum of m(E) * min over E of the payoff.
inline double choquet_mobius_value(const MobiusVector& m, std::span<const double> payoff) {
  const std::uint32_t size = static_cast<std::uint32_t>(m.mass().size());
  double total = 0.0;
  for (std::uint32_t s = 1; s < size; ++s) {
    const double mass = m.mass()[s];
    if (mass == 0.0) continue;
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m.space().size(); ++i) {
      if (s & (1u << i)) lo = std::min(lo, payoff[i]);
    }
    total += mass * lo;
  }
  return total;
}

// Choquet integral of a capacity. Evaluates both the sort route and the
// Mobius route, insists they agree, and returns the sort value.
inline double choquet_integral(const SetFunction& f, std::span<const double> payoff) {
  if (!f.is_capacity()) {
    throw CapacityError("choquet_integral requires a capacity (grounded, normalized, monotone)");
  }
  const double by_sort = choquet_sort_value(f, payoff);
  const double by_mobius = choquet_mobius_value(mobius_transform(f), payoff);
  if (std::fabs(by_sort - by_mobius) > kValueTol) {
    throw Error("Choquet routes disagree beyond tolerance; numeric fault");
  }
  return by_sort;
}

// Conjugate capacity: dual(A) = f(S) - f(S - A).
inline SetFunction dual_capacity(const SetFunction& f) {
  const std::uint32_t full = f.space().full_mask();
  std::vector<double> v(f.values().size());
  for (std::uint32_t s = 0; s <= full; ++s) {
    v[s] = f.values()[full] - f.values()[full & ~s];
  }
  return SetFunction(f.space(), std::move(v));
}

}  // namespace veridec
