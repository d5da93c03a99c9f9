#pragma once

// Recovering the subjective structure behind a capacity: Mobius-positive
// core events, the phi map (unique minimal core member per state), the eta
// measure that rebuilds the model, critical (min/max-increasing) events,
// and union-closure uniqueness classes.
//
// A capacity belongs to the verification model class iff its Mobius mass is
// non-negative on subsets of the relevant support, every state has a unique
// minimal positive-mass event, and every positive-mass event is claimed as
// some state's minimal event. Violations throw ModelClassError.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "veridec/decision.hpp"
#include "veridec/errors.hpp"
#include "veridec/events.hpp"
#include "veridec/set_function.hpp"

namespace veridec {

struct IdentificationResult {
  EventFamily verifiable_core;  // events with Mobius mass above tolerance
  EventFamily union_closure;    // cl_union of the core; the uniqueness class
  std::vector<Event> phi;       // per state: minimal core member containing it
  std::vector<double> eta;      // per state: rebuilt probability mass
  Event irrelevant_states;      // states contained in no core member
};

// The capacity a scenario induces on events: the model utility of the
// binary act paying utility 1 on F and 0 elsewhere.
inline SetFunction induced_capacity(const Scenario& sc) {
  SetFunction nu = SetFunction::zeros(sc.space());
  std::vector<double> indicator(sc.space().size(), 0.0);
  const std::uint32_t m = sc.space().num_events();
  for (std::uint32_t f = 0; f < m; ++f) {
    for (int i = 0; i < sc.space().size(); ++i) indicator[i] = (f >> i) & 1u ? 1.0 : 0.0;
    nu[{f}] = model_value(sc.model(), sc.verifiable(), sc.beliefs(), indicator);
  }
  return nu;
}

inline IdentificationResult recover_structure(const SetFunction& nu, double tol = kValueTol) {
  if (!nu.is_capacity()) {
    throw CapacityError("recover_structure requires a capacity");
  }
  const MobiusVector m = mobius_transform(nu);
  const int n = nu.space().size();

  std::vector<Event> core_members;
  std::uint32_t support_bits = 0;
  for (std::uint32_t s = 1; s < nu.space().num_events(); ++s) {
    if (m[{s}] > tol) {
      core_members.push_back({s});
      support_bits |= s;
    }
  }
  const Event support{support_bits};

  for_each_subset(support_bits, [&](std::uint32_t s) {
    if (m[{s}] < -tol) {
      throw ModelClassError("not a verification capacity: negative Mobius mass inside support");
    }
  });

  EventFamily core(core_members);
  IdentificationResult result;
  result.verifiable_core = core;
  result.union_closure = close_under_union(core);
  result.irrelevant_states = nu.space().complement(support);
  result.phi.assign(n, kEmptyEvent);
  result.eta.assign(n, 0.0);

  // phi(s): the least core member containing s. Canonical order puts
  // smaller events first, so the first hit is a minimality candidate; it
  // must then be contained in every core member holding s, or minimality
  // is not unique and the input is outside the model class.
  std::vector<int> claimed(core.size(), 0);
  for (int s = 0; s < n; ++s) {
    if (!support.contains(s)) continue;
    std::optional<std::size_t> least;
    for (std::size_t k = 0; k < core.members().size(); ++k) {
      if (!core.members()[k].contains(s)) continue;
      if (!least) {
        least = k;
      } else if (!core.members()[*least].subset_of(core.members()[k])) {
        throw ModelClassError(
            "not a verification capacity: minimal core events containing state " +
            nu.space().name(s) + " are not unique");
      }
    }
    result.phi[s] = core.members()[*least];
    ++claimed[*least];
  }

  for (std::size_t k = 0; k < core.members().size(); ++k) {
    if (claimed[k] == 0) {
      throw ModelClassError(
          "not a verification capacity: positive mass on an event that is minimal for no state");
    }
  }

  for (int s = 0; s < n; ++s) {
    if (!support.contains(s)) continue;
    const Event e = result.phi[s];
    std::size_t k = 0;
    while (!(core.members()[k] == e)) ++k;
    result.eta[s] = m[e] / static_cast<double>(claimed[k]);
  }
  return result;
}

namespace detail {

// Shared machinery for the critical-event predicates: the Mobius support
// drives the nonnull test (F is nonnull iff nu(F) is positive or F meets a
// positive-mass event).
struct CriticalContext {
  const SetFunction& nu;
  Event support;
  double tol;

  bool nonnull(Event f) const { return nu[f] > tol || f.intersects(support); }

  // Strict-increase test over every nonnull nonempty F inside E, with F = E
  // allowed (dropping all of E must also strictly hurt).
  bool min_increasing(Event e) const {
    if (e.empty()) return false;
    bool any_nonnull = false;
    bool ok = true;
    for_each_subset(e.bits, [&](std::uint32_t sub) {
      if (sub == 0 || !ok) return;
      const Event f{sub};
      if (!nonnull(f)) return;
      any_nonnull = true;
      if (!(nu[e] > nu[e - f] + tol)) ok = false;
    });
    return any_nonnull && ok;
  }
};

inline CriticalContext make_context(const SetFunction& nu, const MobiusVector& m, double tol) {
  return CriticalContext{nu, m.positive_support(tol), tol};
}

}  // namespace detail

// Min-increasing events: dropping a good consequence from any nonnull part
// of E strictly lowers binary-act value. These are the verification-side
// critical events.
inline bool is_min_increasing(const SetFunction& nu, Event e, double tol = kValueTol) {
  const MobiusVector m = mobius_transform(nu);
  return detail::make_context(nu, m, tol).min_increasing(e);
}

// Max-increasing events: raising a consequence on any nonnull part of E
// strictly improves binary-act value. Equivalent to min-increasing under
// the conjugate capacity, which is how the obfuscation side reduces to the
// verification side.
inline bool is_max_increasing(const SetFunction& nu, Event e, double tol = kValueTol) {
  return is_min_increasing(dual_capacity(nu), e, tol);
}

enum class CriticalMode { kMin, kMax };

// All critical events over the non-irrelevant support.
inline EventFamily critical_family(const SetFunction& nu, CriticalMode mode,
                                   double tol = kValueTol) {
  if (mode == CriticalMode::kMax) {
    return critical_family(dual_capacity(nu), CriticalMode::kMin, tol);
  }
  const MobiusVector m = mobius_transform(nu);
  const auto ctx = detail::make_context(nu, m, tol);
  std::vector<Event> found;
  for_each_subset(ctx.support.bits, [&](std::uint32_t sub) {
    if (sub == 0) return;
    if (ctx.min_increasing({sub})) found.push_back({sub});
  });
  return EventFamily(std::move(found));
}

// Preference equivalence up to the union closure (the uniqueness class):
// closures agree and beliefs agree on every closure member and its
// complement. Optional aligned utility samples are compared up to a
// positive affine transform.
inline bool same_preferences(const IdentificationResult& r1, std::span<const double> beliefs1,
                             const IdentificationResult& r2, std::span<const double> beliefs2,
                             double tol = kValueTol,
                             std::span<const double> utility1 = {},
                             std::span<const double> utility2 = {}) {
  if (beliefs1.size() != beliefs2.size()) {
    throw ValidationError("same_preferences: different state spaces");
  }
  if (!(r1.union_closure == r2.union_closure)) return false;

  auto mass = [](std::span<const double> beliefs, Event e) {
    double total = 0.0;
    for (std::size_t i = 0; i < beliefs.size(); ++i) {
      if (e.contains(static_cast<int>(i))) total += beliefs[i];
    }
    return total;
  };
  const std::uint32_t full = (1u << beliefs1.size()) - 1u;
  for (Event e : r1.union_closure) {
    const Event comp{full & ~e.bits};
    if (std::fabs(mass(beliefs1, e) - mass(beliefs2, e)) > tol) return false;
    if (std::fabs(mass(beliefs1, comp) - mass(beliefs2, comp)) > tol) return false;
  }

  if (!utility1.empty() || !utility2.empty()) {
    if (utility1.size() != utility2.size()) {
      throw ValidationError("same_preferences: utility samples must be aligned");
    }
    // Fit u1 = theta * u2 + phi from the widest pair, then verify.
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < utility2.size(); ++i) {
      if (utility2[i] < utility2[lo]) lo = i;
      if (utility2[i] > utility2[hi]) hi = i;
    }
    if (std::fabs(utility2[hi] - utility2[lo]) <= tol) {
      // Degenerate sample; accept only if u1 is constant too.
      for (std::size_t i = 1; i < utility1.size(); ++i) {
        if (std::fabs(utility1[i] - utility1[0]) > tol) return false;
      }
      return true;
    }
    const double theta =
        (utility1[hi] - utility1[lo]) / (utility2[hi] - utility2[lo]);
    if (!(theta > 0.0)) return false;
    const double phi = utility1[lo] - theta * utility2[lo];
    for (std::size_t i = 0; i < utility1.size(); ++i) {
      if (std::fabs(utility1[i] - (theta * utility2[i] + phi)) > tol) return false;
    }
  }
  return true;
}

}  // namespace veridec
