#pragma once

// Welfare loss, transparency loss, the adversarial menu searches behind the
// indeterminacy corollaries, and comparative risk/verifiability statics.
//
// Loss is always measured in expected utility under "true" beliefs (the
// scenario's own mu unless overridden): the EU of the best menu act minus
// the EU of the act the model actually picks. Witness searches are
// deterministic grid scans; failure at a resolution is reported, never
// silently widened.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "veridec/decision.hpp"
#include "veridec/errors.hpp"
#include "veridec/events.hpp"
#include "veridec/identification.hpp"
#include "veridec/set_function.hpp"

namespace veridec {

struct Menu {
  std::vector<Act> acts;
};

struct LossReport {
  std::string eu_best;
  double eu_best_value = 0.0;
  std::string model_best;
  double model_best_value = 0.0;  // in model-utility units
  double model_best_eu = 0.0;     // EU of the model's pick under true beliefs
  double loss = 0.0;              // eu_best_value - model_best_eu, >= 0
  std::optional<double> transparency_delta;
};

namespace detail {

inline void check_true_beliefs(const Scenario& sc, std::span<const double> tb) {
  if (tb.size() != static_cast<std::size_t>(sc.space().size())) {
    throw ValidationError("true beliefs: need one probability per state");
  }
  double sum = 0.0;
  for (double p : tb) {
    if (p < 0.0) throw ValidationError("true beliefs: negative probability");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kValidityTol) {
    throw ValidationError("true beliefs: probabilities must sum to 1");
  }
}

}  // namespace detail

// Expected-utility shortfall of the model-optimal act on a strict menu.
inline LossReport welfare_loss(const Scenario& sc, const Menu& menu,
                               std::span<const double> true_beliefs = {}) {
  if (menu.acts.empty()) throw ValidationError("welfare_loss: empty menu");
  std::span<const double> tb =
      true_beliefs.empty() ? std::span<const double>(sc.beliefs()) : true_beliefs;
  detail::check_true_beliefs(sc, tb);

  std::vector<double> model_values;
  std::vector<double> eu_values;
  for (const Act& a : menu.acts) {
    const auto util = sc.utility_vector(a);
    model_values.push_back(model_value(sc.model(), sc.verifiable(), sc.beliefs(), util));
    eu_values.push_back(expected_value(tb, util));
  }
  for (std::size_t i = 0; i < menu.acts.size(); ++i) {
    for (std::size_t j = i + 1; j < menu.acts.size(); ++j) {
      if (std::fabs(model_values[i] - model_values[j]) <= sc.tolerance()) {
        throw ValidationError("menu not strict: acts " + menu.acts[i].name + " and " +
                              menu.acts[j].name + " are model-indifferent");
      }
    }
  }

  LossReport report;
  std::size_t best_model = 0;
  std::size_t best_eu = 0;
  for (std::size_t i = 1; i < menu.acts.size(); ++i) {
    if (model_values[i] > model_values[best_model]) best_model = i;
    if (eu_values[i] > eu_values[best_eu]) best_eu = i;
  }
  report.model_best = menu.acts[best_model].name;
  report.model_best_value = model_values[best_model];
  report.model_best_eu = eu_values[best_model];
  report.eu_best = menu.acts[best_eu].name;
  report.eu_best_value = eu_values[best_eu];
  report.loss = report.eu_best_value - report.model_best_eu;
  return report;
}

// Loss change when the verifiable family is enriched to `richer`:
// T = L(current family) - L(richer family).
inline double transparency_loss(const Scenario& sc, const Menu& menu, const EventFamily& richer,
                                std::span<const double> true_beliefs = {}) {
  const Scenario enriched = sc.with_verifiable(richer);
  const EventFamily coarse_cl = close_under_union(sc.verifiable());
  const EventFamily richer_cl = close_under_union(enriched.verifiable());
  if (!coarse_cl.subset_of(richer_cl)) {
    throw ValidationError("transparency_loss: richer family does not refine the verifiable events");
  }
  const LossReport base = welfare_loss(sc, menu, true_beliefs);
  const LossReport fine = welfare_loss(enriched, menu, true_beliefs);
  return base.loss - fine.loss;
}

// ---------------------------------------------------------------------------
// Witness searches.

namespace detail {

inline std::string payoff_act_name(std::span<const double> payoff) {
  std::string name = "act(";
  for (std::size_t i = 0; i < payoff.size(); ++i) {
    if (i) name += ",";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", payoff[i]);
    name += buf;
  }
  return name + ")";
}

// Deterministic belief candidates: each state concentrated at 0.99, then at
// 0.5, then uniform. Matches the concentrated-belief constructions in the
// worked examples.
inline std::vector<std::vector<double>> belief_candidates(int n) {
  std::vector<std::vector<double>> out;
  for (double peak : {0.99, 0.5}) {
    for (int i = 0; i < n; ++i) {
      std::vector<double> b(n, n > 1 ? (1.0 - peak) / (n - 1) : 0.0);
      b[i] = n > 1 ? peak : 1.0;
      out.push_back(std::move(b));
    }
  }
  out.push_back(std::vector<double>(n, 1.0 / n));
  return out;
}

inline EventFamily validated_closure(const StateSpace& space, const EventFamily& family) {
  for (Event e : family) {
    if (!space.contains_event(e)) {
      throw ValidationError("family: event references states outside the space");
    }
  }
  EventFamily closed = close_under_intersection(family);
  if (!is_pi_system_with_support(closed, space.full_event())) {
    throw ValidationError("family: closure must contain the full state set");
  }
  return closed;
}

inline EventFamily strip_empty(const EventFamily& family) {
  std::vector<Event> members;
  for (Event e : family) {
    if (!e.empty()) members.push_back(e);
  }
  return EventFamily(std::move(members));
}

inline bool family_is_full(const StateSpace& space, const EventFamily& union_closed) {
  return strip_empty(union_closed).size() == space.num_events() - 1;
}

// All payoff vectors over `grid`, lexicographic.
inline std::vector<std::vector<double>> lexicographic_acts(const std::vector<double>& grid,
                                                           int n) {
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty()) throw ValidationError("payoff grid: empty");
  std::vector<std::vector<double>> acts;
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<double> payoff(n);
    for (int i = 0; i < n; ++i) payoff[i] = sorted[idx[i]];
    acts.push_back(std::move(payoff));
    int i = n - 1;
    while (i >= 0 && ++idx[i] == static_cast<int>(sorted.size())) idx[i--] = 0;
    if (i < 0) break;
  }
  return acts;
}

}  // namespace detail

struct IndeterminacyWitnesses {
  Menu negative_menu;  // T(menu, richer) < 0
  std::vector<double> negative_beliefs;
  double negative_T = 0.0;
  Menu positive_menu;  // T(menu, richer) > 0
  std::vector<double> positive_beliefs;
  double positive_T = 0.0;
};

// Search for the two menus behind the welfare-loss indeterminacy result:
// enriching the verifiable family strictly helps on one menu and strictly
// hurts on another. Deterministic lexicographic scan over two-act menus on
// the grid, each act optionally perturbed by +/- `perturbation` on a single
// state to break ties.
inline IndeterminacyWitnesses find_indeterminacy_witnesses(
    const StateSpace& space, const UtilitySpec& utility, const EventFamily& coarse,
    const EventFamily& richer, const std::vector<double>& payoff_grid,
    ModelKind model = ModelKind::kVerification, double perturbation = 0.01,
    double tol = kValueTol) {
  const EventFamily coarse_closed = detail::validated_closure(space, coarse);
  const EventFamily richer_closed = detail::validated_closure(space, richer);
  const EventFamily coarse_cl = close_under_union(coarse_closed);
  const EventFamily richer_cl = close_under_union(richer_closed);
  if (!detail::strip_empty(coarse_cl).subset_of(detail::strip_empty(richer_cl)) ||
      detail::strip_empty(coarse_cl) == detail::strip_empty(richer_cl)) {
    throw ValidationError("find_indeterminacy_witnesses: need cl(V) strictly inside cl(V')");
  }
  if (detail::family_is_full(space, richer_cl)) {
    throw ValidationError("find_indeterminacy_witnesses: richer family must not be the full power set");
  }

  const int n = space.size();
  const auto base_acts = detail::lexicographic_acts(payoff_grid, n);
  const auto beliefs_list = detail::belief_candidates(n);

  IndeterminacyWitnesses out;
  bool have_neg = false;
  bool have_pos = false;

  auto util_of = [&](const std::vector<double>& payoff) {
    std::vector<double> u(payoff.size());
    for (std::size_t i = 0; i < payoff.size(); ++i) u[i] = utility.apply(payoff[i]);
    return u;
  };

  auto consider = [&](const std::vector<double>& beliefs, const std::vector<double>& pa,
                      const std::vector<double>& pb) {
    const auto ua = util_of(pa);
    const auto ub = util_of(pb);
    const double ca = model_value(model, coarse_closed, beliefs, ua);
    const double cb = model_value(model, coarse_closed, beliefs, ub);
    if (std::fabs(ca - cb) <= tol) return;
    const double ra = model_value(model, richer_closed, beliefs, ua);
    const double rb = model_value(model, richer_closed, beliefs, ub);
    if (std::fabs(ra - rb) <= tol) return;
    const double ea = expected_value(beliefs, ua);
    const double eb = expected_value(beliefs, ub);
    const double eu_best = std::max(ea, eb);
    const double loss_coarse = eu_best - (ca > cb ? ea : eb);
    const double loss_richer = eu_best - (ra > rb ? ea : eb);
    const double t = loss_coarse - loss_richer;
    if (!have_neg && t < -tol) {
      have_neg = true;
      out.negative_menu.acts = {Act{detail::payoff_act_name(pa), pa},
                                Act{detail::payoff_act_name(pb), pb}};
      out.negative_beliefs = beliefs;
      out.negative_T = t;
    }
    if (!have_pos && t > tol) {
      have_pos = true;
      out.positive_menu.acts = {Act{detail::payoff_act_name(pa), pa},
                                Act{detail::payoff_act_name(pb), pb}};
      out.positive_beliefs = beliefs;
      out.positive_T = t;
    }
  };

  for (const auto& beliefs : beliefs_list) {
    for (std::size_t i = 0; i < base_acts.size() && !(have_neg && have_pos); ++i) {
      for (std::size_t j = i + 1; j < base_acts.size() && !(have_neg && have_pos); ++j) {
        consider(beliefs, base_acts[i], base_acts[j]);
        if (perturbation == 0.0) continue;
        for (int which = 0; which < 2 && !(have_neg && have_pos); ++which) {
          for (int s = 0; s < n && !(have_neg && have_pos); ++s) {
            for (double sign : {+1.0, -1.0}) {
              auto pa = base_acts[i];
              auto pb = base_acts[j];
              auto& target = which == 0 ? pa : pb;
              target[s] += sign * perturbation;
              if (target[s] < 0.0 && utility.kind() == UtilityKind::kPower) continue;
              consider(beliefs, pa, pb);
              if (have_neg && have_pos) break;
            }
          }
        }
      }
    }
    if (have_neg && have_pos) break;
  }
  if (!(have_neg && have_pos)) {
    throw SearchExhaustedError("indeterminacy witnesses not found at this grid resolution");
  }
  return out;
}

struct VOLossWitnesses {
  bool trivial_certificate = false;  // full verifiability: both losses always 0
  long certificate_samples = 0;
  Menu verification_loss_menu;  // verification loss > 0, obfuscation loss = 0
  Menu obfuscation_loss_menu;   // obfuscation loss > 0, verification loss = 0
  std::vector<double> beliefs;
  double verification_loss = 0.0;
  double obfuscation_loss = 0.0;
};

// Witnesses for the verification/obfuscation loss dichotomy: with a
// nontrivial verifiable family there are menus making either model strictly
// worse than the other; with full verifiability both losses vanish and a
// sampled certificate is returned instead.
inline VOLossWitnesses find_vo_loss_witnesses(const StateSpace& space,
                                              const UtilitySpec& utility,
                                              const EventFamily& family,
                                              const std::vector<double>& payoff_grid,
                                              double tol = kValueTol) {
  const EventFamily closed = detail::validated_closure(space, family);
  const EventFamily cl = close_under_union(closed);
  const int n = space.size();
  const auto base_acts = detail::lexicographic_acts(payoff_grid, n);
  const auto beliefs_list = detail::belief_candidates(n);

  auto util_of = [&](const std::vector<double>& payoff) {
    std::vector<double> u(payoff.size());
    for (std::size_t i = 0; i < payoff.size(); ++i) u[i] = utility.apply(payoff[i]);
    return u;
  };

  // Pair losses under both models; nullopt when the menu is not strict
  // under either model.
  struct PairLosses {
    double verification = 0.0;
    double obfuscation = 0.0;
  };
  auto losses = [&](const std::vector<double>& beliefs, const std::vector<double>& pa,
                    const std::vector<double>& pb) -> std::optional<PairLosses> {
    const auto ua = util_of(pa);
    const auto ub = util_of(pb);
    const double va = verification_value(closed, beliefs, ua);
    const double vb = verification_value(closed, beliefs, ub);
    if (std::fabs(va - vb) <= tol) return std::nullopt;
    const double oa = obfuscation_value(closed, beliefs, ua);
    const double ob = obfuscation_value(closed, beliefs, ub);
    if (std::fabs(oa - ob) <= tol) return std::nullopt;
    const double ea = expected_value(beliefs, ua);
    const double eb = expected_value(beliefs, ub);
    const double eu_best = std::max(ea, eb);
    return PairLosses{eu_best - (va > vb ? ea : eb), eu_best - (oa > ob ? ea : eb)};
  };

  VOLossWitnesses out;
  if (detail::family_is_full(space, cl)) {
    out.trivial_certificate = true;
    for (const auto& beliefs : beliefs_list) {
      for (std::size_t i = 0; i < base_acts.size(); ++i) {
        for (std::size_t j = i + 1; j < base_acts.size(); ++j) {
          const auto pl = losses(beliefs, base_acts[i], base_acts[j]);
          if (!pl) continue;
          ++out.certificate_samples;
          if (pl->verification > tol || pl->obfuscation > tol) {
            throw Error("full verifiability produced a nonzero loss; numeric fault");
          }
        }
      }
    }
    return out;
  }

  for (const auto& beliefs : beliefs_list) {
    bool have_v = false;
    bool have_o = false;
    VOLossWitnesses candidate;
    candidate.beliefs = beliefs;
    for (std::size_t i = 0; i < base_acts.size() && !(have_v && have_o); ++i) {
      for (std::size_t j = i + 1; j < base_acts.size() && !(have_v && have_o); ++j) {
        const auto pl = losses(beliefs, base_acts[i], base_acts[j]);
        if (!pl) continue;
        Menu menu;
        menu.acts = {Act{detail::payoff_act_name(base_acts[i]), base_acts[i]},
                     Act{detail::payoff_act_name(base_acts[j]), base_acts[j]}};
        if (!have_v && pl->verification > tol && pl->obfuscation <= tol) {
          have_v = true;
          candidate.verification_loss_menu = menu;
          candidate.verification_loss = pl->verification;
        }
        if (!have_o && pl->obfuscation > tol && pl->verification <= tol) {
          have_o = true;
          candidate.obfuscation_loss_menu = menu;
          candidate.obfuscation_loss = pl->obfuscation;
        }
      }
    }
    if (have_v && have_o) {
      out = std::move(candidate);
      return out;
    }
  }
  throw SearchExhaustedError("loss-dichotomy witnesses not found at this grid resolution");
}

// ---------------------------------------------------------------------------
// Comparative statics.

enum class RiskRelation { kMoreAverse, kLessAverse, kEqual, kIncomparable };

// Relation of u2 to u1: discrete concavity/convexity of u2 composed with
// the inverse of u1, read off slope monotonicity on the grid.
inline RiskRelation compare_risk_aversion(const UtilitySpec& u1, const UtilitySpec& u2,
                                          const std::vector<double>& grid,
                                          double tol = kValueTol) {
  if (grid.size() < 2) throw ValidationError("compare_risk_aversion: need at least two points");
  std::vector<double> xs = grid;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> v(xs.size()), w(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    v[i] = u1.apply(xs[i]);
    w[i] = u2.apply(xs[i]);
    if (i > 0 && (v[i] <= v[i - 1] || w[i] <= w[i - 1])) {
      throw ValidationError("compare_risk_aversion: utilities must be strictly increasing on the grid");
    }
  }
  std::vector<double> slope(xs.size() - 1);
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    slope[i] = (w[i + 1] - w[i]) / (v[i + 1] - v[i]);
    scale = std::max(scale, std::fabs(slope[i]));
  }
  const double eps = tol * std::max(1.0, scale);
  bool concave = true;
  bool convex = true;
  for (std::size_t i = 0; i + 1 < slope.size(); ++i) {
    if (slope[i + 1] > slope[i] + eps) concave = false;
    if (slope[i + 1] < slope[i] - eps) convex = false;
  }
  if (concave && convex) return RiskRelation::kEqual;
  if (concave) return RiskRelation::kMoreAverse;
  if (convex) return RiskRelation::kLessAverse;
  return RiskRelation::kIncomparable;
}

enum class VerifiabilityRelation { kSubset, kSuperset, kEqual, kIncomparable };

// Relation between the union closures of the recovered verifiable cores,
// cross-checked against the behavioral indifference condition. The two
// tests must agree; disagreement signals input outside the model class.
inline VerifiabilityRelation compare_verifiability(const SetFunction& nu1,
                                                   const SetFunction& nu2,
                                                   double tol = kValueTol) {
  if (!(nu1.space() == nu2.space())) {
    throw ValidationError("compare_verifiability: different state spaces");
  }
  const IdentificationResult r1 = recover_structure(nu1, tol);
  const IdentificationResult r2 = recover_structure(nu2, tol);
  if (!(r1.irrelevant_states == r2.irrelevant_states)) {
    throw ValidationError("compare_verifiability: null-event mismatch (supports differ)");
  }
  const bool sub = r1.union_closure.subset_of(r2.union_closure);
  const bool sup = r2.union_closure.subset_of(r1.union_closure);

  // Behavioral test: whenever DM-b is indifferent to trimming E by F, DM-a
  // must be as well; that holds iff cl(V_a) is inside cl(V_b).
  auto refines = [&](const SetFunction& a, const SetFunction& b) {
    const std::uint32_t m = a.space().num_events();
    for (std::uint32_t e = 0; e < m; ++e) {
      bool ok = true;
      for_each_subset(e, [&](std::uint32_t f) {
        if (!ok || f == 0) return;
        const Event ev{e};
        const Event trimmed{e & ~f};
        if (std::fabs(b[ev] - b[trimmed]) <= tol && std::fabs(a[ev] - a[trimmed]) > tol) {
          ok = false;
        }
      });
      if (!ok) return false;
    }
    return true;
  };
  const bool sub_b = refines(nu1, nu2);
  const bool sup_b = refines(nu2, nu1);
  if (sub != sub_b || sup != sup_b) {
    throw Error("compare_verifiability: behavioral and closure tests disagree; input outside model class");
  }
  if (sub && sup) return VerifiabilityRelation::kEqual;
  if (sub) return VerifiabilityRelation::kSubset;
  if (sup) return VerifiabilityRelation::kSuperset;
  return VerifiabilityRelation::kIncomparable;
}

}  // namespace veridec
