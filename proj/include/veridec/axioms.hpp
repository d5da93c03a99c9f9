#pragma once

// Executable axiom checkers. Each checker samples or exhausts a family of
// predicate instances and returns an AxiomReport whose witnesses replay to
// genuine violations. Axioms stated through preference averages are checked
// at the utility level (the u-midpoint identity), so no certainty
// equivalents are ever constructed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "veridec/decision.hpp"
#include "veridec/errors.hpp"
#include "veridec/events.hpp"
#include "veridec/identification.hpp"
#include "veridec/set_function.hpp"

namespace veridec {

struct SamplingPlan {
  int grid_points = 5;
  double grid_lo = 0.0;
  double grid_hi = 100.0;
  // Exhaustive enumeration up to this many states; random sampling beyond.
  int exhaustive_max_states = 3;
  int random_samples = 10000;
  std::uint64_t seed = 0;
};

struct AxiomWitness {
  std::string kind;
  std::vector<Event> events;
  std::vector<std::vector<double>> payoffs;
  std::vector<double> values;

  friend bool operator<(const AxiomWitness& a, const AxiomWitness& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    auto key = [](const AxiomWitness& w) {
      std::vector<std::uint32_t> bits;
      for (Event e : w.events) bits.push_back(e.bits);
      return bits;
    };
    if (key(a) != key(b)) return key(a) < key(b);
    return a.payoffs < b.payoffs;
  }
};

struct AxiomReport {
  std::string axiom;
  bool holds = true;
  std::vector<AxiomWitness> witnesses;
  long samples_checked = 0;
  std::uint64_t seed = 0;
  std::string note;
};

inline constexpr std::size_t kMaxWitnesses = 32;

namespace detail {

inline void add_witness(AxiomReport& report, AxiomWitness w) {
  report.holds = false;
  if (report.witnesses.size() < kMaxWitnesses) report.witnesses.push_back(std::move(w));
}

inline void finalize(AxiomReport& report) {
  std::sort(report.witnesses.begin(), report.witnesses.end());
}

}  // namespace detail

// Consequences the utility spec can actually take: a linear grid for
// identity/power, the table keys otherwise.
inline std::vector<double> consequence_grid(const UtilitySpec& u, const SamplingPlan& plan) {
  std::vector<double> grid;
  if (u.kind() == UtilityKind::kTable) {
    for (const auto& [x, _] : u.table_map()) grid.push_back(x);
    return grid;
  }
  const int k = std::max(2, plan.grid_points);
  for (int i = 0; i < k; ++i) {
    grid.push_back(plan.grid_lo + (plan.grid_hi - plan.grid_lo) * i / (k - 1));
  }
  return grid;
}

// All acts with payoffs drawn from `grid` (n small), or `count` random ones.
inline std::vector<std::vector<double>> grid_acts(const std::vector<double>& grid, int n,
                                                  bool exhaustive, int count,
                                                  std::mt19937_64& rng) {
  std::vector<std::vector<double>> acts;
  if (exhaustive) {
    std::vector<int> idx(n, 0);
    while (true) {
      std::vector<double> payoff(n);
      for (int i = 0; i < n; ++i) payoff[i] = grid[idx[i]];
      acts.push_back(std::move(payoff));
      int i = 0;
      while (i < n && ++idx[i] == static_cast<int>(grid.size())) idx[i++] = 0;
      if (i == n) break;
    }
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
    for (int k = 0; k < count; ++k) {
      std::vector<double> payoff(n);
      for (int i = 0; i < n; ++i) payoff[i] = grid[pick(rng)];
      acts.push_back(std::move(payoff));
    }
  }
  return acts;
}

// ---------------------------------------------------------------------------
// Event classification.

enum class EventWeight { kNull, kUniversal, kEssential };

struct EventClassification {
  EventWeight weight = EventWeight::kNull;
  bool irrelevant = false;
};

// Null/universal/essential by binary-act weight; irrelevance by checking
// that rewriting payoffs on E never moves any sampled act's value. A null
// event need not be irrelevant.
inline EventClassification classify_event(const Scenario& sc, Event e,
                                          const SamplingPlan& plan = {}) {
  if (sc.utility().kind() == UtilityKind::kTable && sc.utility().table_map().size() < 2) {
    throw ValidationError("classify_event needs two strictly ranked consequences");
  }
  EventClassification out;
  const double w = sc.binary_weight(e);
  if (std::fabs(w) <= sc.tolerance()) {
    out.weight = EventWeight::kNull;
  } else if (std::fabs(w - 1.0) <= sc.tolerance()) {
    out.weight = EventWeight::kUniversal;
  } else {
    out.weight = EventWeight::kEssential;
  }

  const int n = sc.space().size();
  const auto grid = consequence_grid(sc.utility(), plan);
  std::mt19937_64 rng(plan.seed);
  const bool exhaustive = n <= plan.exhaustive_max_states + 1;
  const auto acts = grid_acts(grid, n, exhaustive, plan.random_samples / 10, rng);

  out.irrelevant = true;
  for (const auto& payoff : acts) {
    std::vector<double> util(n);
    for (int i = 0; i < n; ++i) util[i] = sc.utility().apply(payoff[i]);
    const double base = model_value(sc.model(), sc.verifiable(), sc.beliefs(), util);
    for (double gamma : grid) {
      std::vector<double> patched = util;
      for (int i = 0; i < n; ++i) {
        if (e.contains(i)) patched[i] = sc.utility().apply(gamma);
      }
      const double moved = model_value(sc.model(), sc.verifiable(), sc.beliefs(), patched);
      if (std::fabs(moved - base) > sc.tolerance()) {
        out.irrelevant = false;
        break;
      }
    }
    if (!out.irrelevant) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comonotonicity and comonotonic independence.

inline bool are_comonotonic(std::span<const double> utila, std::span<const double> utilb) {
  for (std::size_t s = 0; s < utila.size(); ++s) {
    for (std::size_t t = 0; t < utila.size(); ++t) {
      if (utila[s] > utila[t] && utilb[s] < utilb[t]) return false;
    }
  }
  return true;
}

inline bool are_comonotonic(const Act& a, const Act& b, const UtilitySpec& u) {
  std::vector<double> ua(a.payoff.size()), ub(b.payoff.size());
  for (std::size_t i = 0; i < a.payoff.size(); ++i) {
    ua[i] = u.apply(a.payoff[i]);
    ub[i] = u.apply(b.payoff[i]);
  }
  return are_comonotonic(ua, ub);
}

// sign(U(a) - U(b)) must match sign(U(a+c mix) - U(b+c mix)) on every
// pairwise-comonotonic triple. Witnesses are strict preference reversals.
// Exhaustive over the grid for small spaces (with cached pair mixtures);
// larger spaces draw random triples from the grid.
inline AxiomReport check_comonotonic_independence(const Scenario& sc, const SamplingPlan& plan) {
  AxiomReport report;
  report.axiom = "comonotonic_independence";
  report.seed = plan.seed;
  const double tol = sc.tolerance();
  const int n = sc.space().size();

  const auto grid = consequence_grid(sc.utility(), plan);
  std::mt19937_64 rng(plan.seed);
  const bool exhaustive = n <= plan.exhaustive_max_states;
  std::vector<double> scratch(n);
  auto value_of = [&](std::span<const double> util) {
    return model_value(sc.model(), sc.verifiable(), sc.beliefs(), util);
  };
  auto record = [&](const std::vector<double>& pa, const std::vector<double>& pb,
                    const std::vector<double>& pc, double va, double vb, double ma, double mb) {
    ++report.samples_checked;
    if ((va > vb + tol && ma < mb - tol) || (va < vb - tol && ma > mb + tol)) {
      detail::add_witness(report,
                          AxiomWitness{"preference_reversal", {}, {pa, pb, pc}, {va, vb, ma, mb}});
    }
  };

  std::vector<std::vector<double>> payoffs;
  std::vector<std::vector<double>> utils;
  std::vector<double> value;
  auto prepare_pool = [&](bool pool_exhaustive, int count) {
    payoffs = grid_acts(grid, n, pool_exhaustive, count, rng);
    utils.assign(payoffs.size(), std::vector<double>(n));
    value.assign(payoffs.size(), 0.0);
    for (std::size_t i = 0; i < payoffs.size(); ++i) {
      for (int s = 0; s < n; ++s) utils[i][s] = sc.utility().apply(payoffs[i][s]);
      value[i] = value_of(utils[i]);
    }
  };

  if (exhaustive) {
    prepare_pool(true, 0);
    const std::size_t m = payoffs.size();
    const std::size_t words = (m + 63) / 64;
    std::vector<std::uint64_t> comono(m * words, 0);
    auto set_bit = [&](std::size_t i, std::size_t j) {
      comono[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
    };
    std::vector<double> mix(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        if (!are_comonotonic(utils[i], utils[j])) continue;
        set_bit(i, j);
        set_bit(j, i);
        for (int s = 0; s < n; ++s) scratch[s] = 0.5 * (utils[i][s] + utils[j][s]);
        const double v = value_of(scratch);
        mix[i * m + j] = v;
        mix[j * m + i] = v;
      }
    }
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        if (!((comono[a * words + b / 64] >> (b % 64)) & 1)) continue;
        for (std::size_t w = 0; w < words; ++w) {
          std::uint64_t both = comono[a * words + w] & comono[b * words + w];
          while (both) {
            const std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(both));
            both &= both - 1;
            record(payoffs[a], payoffs[b], payoffs[c], value[a], value[b], mix[a * m + c],
                   mix[b * m + c]);
          }
        }
      }
    }
  } else {
    // Random triples from a bounded pool; no quadratic caches.
    const int pool_size = std::min(plan.random_samples, 512);
    prepare_pool(false, std::max(pool_size, 3));
    const std::size_t m = payoffs.size();
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::vector<double> ma(n), mb(n);
    for (int k = 0; k < plan.random_samples; ++k) {
      const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
      if (a == b) continue;
      if (!are_comonotonic(utils[a], utils[b]) || !are_comonotonic(utils[a], utils[c]) ||
          !are_comonotonic(utils[b], utils[c])) {
        continue;
      }
      for (int s = 0; s < n; ++s) {
        ma[s] = 0.5 * (utils[a][s] + utils[c][s]);
        mb[s] = 0.5 * (utils[b][s] + utils[c][s]);
      }
      record(payoffs[a], payoffs[b], payoffs[c], value[a], value[b], value_of(ma), value_of(mb));
    }
  }

  // Non-vacuity: for non-expected-utility models, record one NON-comonotonic
  // triple whose mixture reverses the ranking. Not a violation; bounded scan.
  if (sc.model() != ModelKind::kExpectedUtility) {
    const std::size_t m = payoffs.size();
    long budget = plan.random_samples;
    bool found = false;
    for (std::size_t a = 0; a < m && !found && budget > 0; ++a) {
      for (std::size_t b = 0; b < m && !found && budget > 0; ++b) {
        if (value[a] <= value[b] + tol) continue;
        for (std::size_t c = 0; c < m && !found && budget > 0; ++c) {
          if (are_comonotonic(utils[a], utils[c]) && are_comonotonic(utils[b], utils[c])) {
            continue;
          }
          --budget;
          std::vector<double> ma(n), mb(n);
          for (int s = 0; s < n; ++s) {
            ma[s] = 0.5 * (utils[a][s] + utils[c][s]);
            mb[s] = 0.5 * (utils[b][s] + utils[c][s]);
          }
          if (value_of(ma) < value_of(mb) - tol) {
            report.note = "non-comonotonic reversal exists; independence restriction is not vacuous";
            found = true;
          }
        }
      }
    }
  }

  detail::finalize(report);
  return report;
}

inline bool replay_comonotonic_independence_witness(const Scenario& sc, const AxiomWitness& w) {
  if (w.payoffs.size() != 3) return false;
  auto util = [&](const std::vector<double>& p) {
    std::vector<double> u(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) u[i] = sc.utility().apply(p[i]);
    return u;
  };
  const auto ua = util(w.payoffs[0]);
  const auto ub = util(w.payoffs[1]);
  const auto uc = util(w.payoffs[2]);
  if (!are_comonotonic(ua, ub) || !are_comonotonic(ua, uc) || !are_comonotonic(ub, uc)) {
    return false;
  }
  auto val = [&](std::span<const double> u) {
    return model_value(sc.model(), sc.verifiable(), sc.beliefs(), u);
  };
  std::vector<double> ma(ua.size()), mb(ub.size());
  for (std::size_t i = 0; i < ua.size(); ++i) {
    ma[i] = 0.5 * (ua[i] + uc[i]);
    mb[i] = 0.5 * (ub[i] + uc[i]);
  }
  const double d1 = val(ua) - val(ub);
  const double d2 = val(ma) - val(mb);
  const double tol = sc.tolerance();
  return (d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol);
}

// ---------------------------------------------------------------------------
// Supermodularity / submodularity of the induced capacity.

// Exhaustive pairwise check of the capacity form. Verification scenarios
// assert the supermodular direction, obfuscation the submodular one,
// expected utility both.
inline AxiomReport check_supermodularity(const Scenario& sc) {
  AxiomReport report;
  const bool want_super = sc.model() != ModelKind::kObfuscation;
  const bool want_sub = sc.model() != ModelKind::kVerification;
  report.axiom = sc.model() == ModelKind::kVerification   ? "supermodularity"
                 : sc.model() == ModelKind::kObfuscation  ? "submodularity"
                                                          : "modularity";
  const SetFunction nu = induced_capacity(sc);
  const double tol = sc.tolerance();
  const std::uint32_t m = sc.space().num_events();
  for (std::uint32_t e = 0; e < m; ++e) {
    for (std::uint32_t f = e; f < m; ++f) {
      ++report.samples_checked;
      const double lhs = nu[{e | f}] + nu[{e & f}];
      const double rhs = nu[{e}] + nu[{f}];
      if ((want_super && lhs < rhs - tol) || (want_sub && lhs > rhs + tol)) {
        detail::add_witness(report,
                            AxiomWitness{"pair", {{e}, {f}}, {}, {lhs, rhs}});
      }
    }
  }
  detail::finalize(report);
  return report;
}

inline bool replay_supermodularity_witness(const Scenario& sc, const AxiomWitness& w) {
  if (w.events.size() != 2) return false;
  const SetFunction nu = induced_capacity(sc);
  const Event e = w.events[0];
  const Event f = w.events[1];
  const double lhs = nu[e | f] + nu[e & f];
  const double rhs = nu[e] + nu[f];
  const double tol = sc.tolerance();
  const bool want_super = sc.model() != ModelKind::kObfuscation;
  const bool want_sub = sc.model() != ModelKind::kVerification;
  return (want_super && lhs < rhs - tol) || (want_sub && lhs > rhs + tol);
}

// ---------------------------------------------------------------------------
// Critical event modularity.

// For min mode the conditions run on nu itself over its min-critical
// family. For max mode they run on the conjugate capacity: the dual
// preference is a verification preference, and max-increasing events of nu
// are exactly min-increasing events of dual(nu).
inline AxiomReport check_critical_event_modularity(const SetFunction& nu, CriticalMode mode,
                                                   double tol = kValueTol) {
  AxiomReport report;
  report.axiom = mode == CriticalMode::kMin ? "critical_event_modularity_min"
                                            : "critical_event_modularity_max";
  const SetFunction base = mode == CriticalMode::kMin ? nu : dual_capacity(nu);
  const EventFamily family = critical_family(base, CriticalMode::kMin, tol);
  const auto& members = family.members();
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i; j < members.size(); ++j) {
      const Event e = members[i];
      const Event f = members[j];
      ++report.samples_checked;
      if (!(e & f).empty() && !family.contains(e & f)) {
        detail::add_witness(report, AxiomWitness{"intersection_not_critical", {e, f}, {}, {}});
      }
      if (!family.contains(e | f)) {
        detail::add_witness(report, AxiomWitness{"union_not_critical", {e, f}, {}, {}});
      }
      for_each_subset((e | f).bits, [&](std::uint32_t sub) {
        const Event a{sub};
        ++report.samples_checked;
        const double lhs = base[a] + base[a & e & f];
        const double rhs = base[a & e] + base[a & f];
        if (std::fabs(lhs - rhs) > tol) {
          detail::add_witness(report,
                              AxiomWitness{"modularity_identity", {e, f, a}, {}, {lhs, rhs}});
        }
      });
    }
  }
  detail::finalize(report);
  return report;
}

inline bool replay_critical_event_modularity_witness(const SetFunction& nu, CriticalMode mode,
                                                     const AxiomWitness& w,
                                                     double tol = kValueTol) {
  const SetFunction base = mode == CriticalMode::kMin ? nu : dual_capacity(nu);
  const EventFamily family = critical_family(base, CriticalMode::kMin, tol);
  if (w.kind == "intersection_not_critical") {
    return w.events.size() == 2 && !(w.events[0] & w.events[1]).empty() &&
           !family.contains(w.events[0] & w.events[1]);
  }
  if (w.kind == "union_not_critical") {
    return w.events.size() == 2 && !family.contains(w.events[0] | w.events[1]);
  }
  if (w.kind == "modularity_identity") {
    if (w.events.size() != 3) return false;
    const Event e = w.events[0], f = w.events[1], a = w.events[2];
    const double lhs = base[a] + base[a & e & f];
    const double rhs = base[a & e] + base[a & f];
    return std::fabs(lhs - rhs) > tol;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Biseparable grid conditions (finite-dimensional slice of the axioms that
// back the binary-act representation; continuity is out of scope).

namespace detail {

template <typename Value>
AxiomReport biseparable_grid_impl(const StateSpace& space, const UtilitySpec& u,
                                  const SetFunction& nu, Value value, double tol,
                                  const SamplingPlan& plan) {
  AxiomReport report;
  report.axiom = "biseparable_grid";
  report.seed = plan.seed;
  const int n = space.size();
  const auto grid = consequence_grid(u, plan);
  std::mt19937_64 rng(plan.seed);
  const bool exhaustive = n <= plan.exhaustive_max_states;
  auto payoffs = grid_acts(grid, n, exhaustive, plan.random_samples / 10, rng);

  std::vector<std::vector<double>> utils(payoffs.size(), std::vector<double>(n));
  std::vector<double> val(payoffs.size());
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    for (int s = 0; s < n; ++s) utils[i][s] = u.apply(payoffs[i][s]);
    val[i] = value(utils[i]);
  }

  // Dominance: statewise-better never ranked lower.
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    for (std::size_t j = 0; j < payoffs.size(); ++j) {
      if (i == j) continue;
      bool dominates = true;
      for (int s = 0; s < n && dominates; ++s) dominates = utils[i][s] >= utils[j][s];
      if (!dominates) continue;
      ++report.samples_checked;
      if (val[i] < val[j] - tol) {
        detail::add_witness(report, AxiomWitness{"dominance",
                                                 {},
                                                 {payoffs[i], payoffs[j]},
                                                 {val[i], val[j]}});
      }
    }
  }

  // Eventwise monotonicity, both bullets. The binary-act form pins where
  // strictness can be demanded: the first bullet varies the E-side of a
  // top-on-E act, so it needs nu(E) > 0; the second varies the off-E side,
  // whose weight is nu(comp E) when the varied side ranks on top and
  // 1 - nu(E) when it ranks below y, so it needs both to be positive.
  std::vector<double> act(n);
  auto binary = [&](double hi_util, Event on, double lo_util) {
    for (int s = 0; s < n; ++s) act[s] = on.contains(s) ? hi_util : lo_util;
    return value(act);
  };
  const std::uint32_t m = space.num_events();
  for (std::uint32_t bits = 0; bits < m; ++bits) {
    const Event e{bits};
    const bool e_nonnull = nu[e] > tol;
    const bool comp_nonnull = nu[space.complement(e)] > tol && nu[e] < 1.0 - tol;
    for (double x : grid) {
      for (double y : grid) {
        for (double z : grid) {
          const double ux = u.apply(x), uy = u.apply(y), uz = u.apply(z);
          if (uy < uz) continue;
          if (e_nonnull && ux > uy) {
            ++report.samples_checked;
            const double lhs = binary(ux, e, uz);
            const double rhs = binary(uy, e, uz);
            if (lhs <= rhs + tol) {
              detail::add_witness(report,
                                  AxiomWitness{"eventwise_first", {e}, {{x, y, z}}, {lhs, rhs}});
            }
          }
          if (comp_nonnull && ux > uz) {
            ++report.samples_checked;
            // y on E, x (resp. z) elsewhere.
            for (int s = 0; s < n; ++s) act[s] = e.contains(s) ? uy : ux;
            const double lhs = value(act);
            for (int s = 0; s < n; ++s) act[s] = e.contains(s) ? uy : uz;
            const double rhs = value(act);
            if (lhs <= rhs + tol) {
              detail::add_witness(report,
                                  AxiomWitness{"eventwise_second", {e}, {{x, y, z}}, {lhs, rhs}});
            }
          }
        }
      }
    }
  }
  detail::finalize(report);
  return report;
}

}  // namespace detail

inline AxiomReport check_biseparable_grid(const Scenario& sc, const SamplingPlan& plan) {
  const SetFunction nu = induced_capacity(sc);
  return detail::biseparable_grid_impl(
      sc.space(), sc.utility(), nu,
      [&](std::span<const double> util) {
        return model_value(sc.model(), sc.verifiable(), sc.beliefs(), util);
      },
      sc.tolerance(), plan);
}

// Variant for a raw set function evaluated through the (unvalidated)
// Choquet sort route; lets tests inject non-monotone weights and watch
// dominance fail.
inline AxiomReport check_biseparable_capacity(const SetFunction& nu, const SamplingPlan& plan,
                                              double tol = kValueTol) {
  return detail::biseparable_grid_impl(
      nu.space(), UtilitySpec::identity(), nu,
      [&](std::span<const double> util) { return choquet_sort_value(nu, util); }, tol, plan);
}

inline bool replay_biseparable_capacity_witness(const SetFunction& nu, const AxiomWitness& w,
                                                double tol = kValueTol) {
  auto value = [&](std::span<const double> util) { return choquet_sort_value(nu, util); };
  const int n = nu.space().size();
  if (w.kind == "dominance") {
    if (w.payoffs.size() != 2) return false;
    for (int s = 0; s < n; ++s) {
      if (w.payoffs[0][s] < w.payoffs[1][s]) return false;
    }
    return value(w.payoffs[0]) < value(w.payoffs[1]) - tol;
  }
  if ((w.kind == "eventwise_first" || w.kind == "eventwise_second") && w.events.size() == 1 &&
      w.payoffs.size() == 1 && w.payoffs[0].size() == 3) {
    const Event e = w.events[0];
    const double x = w.payoffs[0][0], y = w.payoffs[0][1], z = w.payoffs[0][2];
    std::vector<double> lhs(n), rhs(n);
    if (w.kind == "eventwise_first") {
      if (!(nu[e] > tol) || !(x > y) || !(y >= z)) return false;
      for (int s = 0; s < n; ++s) {
        lhs[s] = e.contains(s) ? x : z;
        rhs[s] = e.contains(s) ? y : z;
      }
    } else {
      if (!(nu[nu.space().complement(e)] > tol) || !(nu[e] < 1.0 - tol) || !(x > z) ||
          !(y >= z)) {
        return false;
      }
      for (int s = 0; s < n; ++s) {
        lhs[s] = e.contains(s) ? y : x;
        rhs[s] = e.contains(s) ? y : z;
      }
    }
    return value(lhs) <= value(rhs) + tol;
  }
  return false;
}

}  // namespace veridec
