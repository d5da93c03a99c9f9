#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "veridec/identification.hpp"

#include "corpus.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace veridec;
using fixtures::ev;

namespace {

SetFunction from_mass(const StateSpace& sp,
                      const std::vector<std::pair<Event, double>>& masses) {
  MobiusVector m = MobiusVector::zeros(sp);
  for (const auto& [e, v] : masses) m[e] = v;
  return zeta_transform(m);
}

SetFunction additive(const StateSpace& sp, const std::vector<double>& atoms) {
  std::vector<std::pair<Event, double>> masses;
  for (int i = 0; i < sp.size(); ++i) masses.push_back({singleton(i), atoms[i]});
  return from_mass(sp, masses);
}

// Rebuild a scenario from an identification result: beliefs = eta,
// verifiable = core plus the full set (the full set never changes values;
// it only satisfies the support requirement).
Scenario rebuild(const Scenario& sc, const IdentificationResult& r) {
  std::vector<Event> members = r.verifiable_core.members();
  members.push_back(sc.space().full_event());
  return Scenario(sc.space(), sc.acts(), sc.utility(), r.eta, EventFamily(members),
                  ModelKind::kVerification);
}

}  // namespace

TEST_CASE("induced capacity of the carbon scenarios") {
  const Scenario sc = fixtures::ccr_verification();
  const StateSpace& sp = sc.space();
  const SetFunction nu = induced_capacity(sc);
  CHECK(nu[ev(sp, {"s", "t"})] == Catch::Approx(0.8).margin(1e-12));
  CHECK(nu[sp.full_event()] == Catch::Approx(1.0));
  for (std::uint32_t bits = 0; bits < sp.num_events(); ++bits) {
    if (bits == sp.full_mask() || bits == ev(sp, {"s", "t"}).bits) continue;
    CHECK(nu[{bits}] == Catch::Approx(0.0).margin(1e-12));
  }
  REQUIRE(nu.is_capacity(1e-12));

  // full power set induces the additive belief measure
  const Scenario full = sc.with_verifiable(fixtures::all_nonempty(sp));
  const SetFunction add = induced_capacity(full);
  CHECK(add.is_additive(1e-12));
  CHECK(add[ev(sp, {"t", "u"})] == Catch::Approx(0.8).margin(1e-12));

  // obfuscation model: dual formula, and conjugate of the verification one
  const Scenario obf = full.with_model(ModelKind::kObfuscation);
  const Scenario obf_ccr = sc.with_model(ModelKind::kObfuscation);
  const SetFunction nu_obf = induced_capacity(obf_ccr);
  const SetFunction conj = dual_capacity(nu);
  for (std::uint32_t bits = 0; bits < sp.num_events(); ++bits) {
    CHECK(nu_obf[{bits}] ==
          Catch::Approx(oracle::induced_obfuscation_direct(sc.verifiable().members(),
                                                           sc.beliefs(), {bits}))
              .margin(1e-12));
    CHECK(nu_obf[{bits}] == Catch::Approx(conj[{bits}]).margin(1e-12));
    CHECK(nu[{bits}] ==
          Catch::Approx(oracle::induced_verification_direct(sc.verifiable().members(),
                                                            sc.beliefs(), {bits}))
              .margin(1e-12));
  }
}

TEST_CASE("recover_structure on the carbon capacity") {
  const Scenario sc = fixtures::ccr_verification();
  const StateSpace& sp = sc.space();
  const IdentificationResult r = recover_structure(induced_capacity(sc));
  CHECK(r.verifiable_core == EventFamily({ev(sp, {"s", "t"}), sp.full_event()}));
  CHECK(r.union_closure == EventFamily({ev(sp, {"s", "t"}), sp.full_event()}));
  CHECK(r.phi[sp.index_of("s")] == ev(sp, {"s", "t"}));
  CHECK(r.phi[sp.index_of("t")] == ev(sp, {"s", "t"}));
  CHECK(r.phi[sp.index_of("u")] == sp.full_event());
  CHECK(r.eta[0] == Catch::Approx(0.4).margin(1e-12));
  CHECK(r.eta[1] == Catch::Approx(0.4).margin(1e-12));
  CHECK(r.eta[2] == Catch::Approx(0.2).margin(1e-12));
  CHECK(r.irrelevant_states.empty());
}

TEST_CASE("recover_structure on an additive capacity") {
  const StateSpace sp = fixtures::ccr_space();
  const IdentificationResult r = recover_structure(additive(sp, {0.2, 0.6, 0.2}));
  CHECK(r.verifiable_core ==
        EventFamily({ev(sp, {"s"}), ev(sp, {"t"}), ev(sp, {"u"})}));
  for (int i = 0; i < 3; ++i) CHECK(r.phi[i] == singleton(i));
  CHECK(r.eta == std::vector<double>{0.2, 0.6, 0.2});
}

TEST_CASE("recover_structure rejects non-model capacities") {
  const StateSpace sp2({"s", "t"});
  SetFunction maxcap = SetFunction::zeros(sp2);
  maxcap[ev(sp2, {"s"})] = 1.0;
  maxcap[ev(sp2, {"t"})] = 1.0;
  maxcap[sp2.full_event()] = 1.0;
  CHECK_THROWS_WITH(recover_structure(maxcap),
                    Catch::Matchers::ContainsSubstring("not a verification capacity"));

  // positive mass that no state claims as its minimal event
  const SetFunction unclaimed =
      from_mass(sp2, {{ev(sp2, {"s"}), 0.5}, {ev(sp2, {"t"}), 0.3}, {sp2.full_event(), 0.2}});
  REQUIRE(unclaimed.is_capacity(1e-12));
  CHECK_THROWS_WITH(recover_structure(unclaimed),
                    Catch::Matchers::ContainsSubstring("not a verification capacity"));

  // two incomparable minimal core members containing s
  const StateSpace sp = fixtures::ccr_space();
  const SetFunction twin =
      from_mass(sp, {{ev(sp, {"s", "t"}), 0.5}, {ev(sp, {"s", "u"}), 0.5}});
  REQUIRE(twin.is_capacity(1e-12));
  CHECK_THROWS_WITH(recover_structure(twin),
                    Catch::Matchers::ContainsSubstring("not unique"));

  // not a capacity at all
  SetFunction bad = SetFunction::zeros(sp);
  CHECK_THROWS_AS(recover_structure(bad), CapacityError);
}

TEST_CASE("min-increasing events") {
  const Scenario sc = fixtures::ccr_verification();
  const StateSpace& sp = sc.space();
  const SetFunction nu = induced_capacity(sc);
  CHECK(is_min_increasing(nu, ev(sp, {"s", "t"})));
  CHECK(is_min_increasing(nu, sp.full_event()));
  CHECK_FALSE(is_min_increasing(nu, ev(sp, {"s"})));
  CHECK_FALSE(is_min_increasing(nu, ev(sp, {"u"})));
  CHECK_FALSE(is_min_increasing(nu, ev(sp, {"t", "u"})));
  CHECK_FALSE(is_min_increasing(nu, kEmptyEvent));

  // additive measure on the full lattice: every event with positive mass
  const SetFunction add = additive(sp, {0.5, 0.5, 0.0});
  CHECK(is_min_increasing(add, ev(sp, {"s"})));
  CHECK(is_min_increasing(add, ev(sp, {"s", "u"})));  // padding by a null atom is harmless
  CHECK(is_min_increasing(add, sp.full_event()));
  CHECK_FALSE(is_min_increasing(add, ev(sp, {"u"})));
}

TEST_CASE("max-increasing events") {
  // the conjugate of the obfuscation capacity carries the verification-side
  // structure, so the max test is the min test on the dual
  const Scenario obf = fixtures::ccr_verification().with_model(ModelKind::kObfuscation);
  const StateSpace& sp = obf.space();
  const SetFunction nu = induced_capacity(obf);
  CHECK(is_max_increasing(nu, ev(sp, {"s", "t"})));
  CHECK(is_max_increasing(nu, sp.full_event()));
  CHECK_FALSE(is_max_increasing(nu, ev(sp, {"s"})));
  CHECK_FALSE(is_max_increasing(nu, kEmptyEvent));

  // min capacity: filling in the last bad state is what moves the value, so
  // proper parts are max-increasing while the full event is not (improving
  // on one state of the all-bad act changes nothing)
  SetFunction mincap = SetFunction::zeros(StateSpace({"s", "t"}));
  mincap[Event{0b11}] = 1.0;
  CHECK_FALSE(is_max_increasing(mincap, Event{0b11}));
  CHECK(is_max_increasing(mincap, Event{0b01}));

  // additive with all atoms positive: every non-empty event
  const SetFunction add = additive(sp, {0.2, 0.6, 0.2});
  int count = 0;
  for (std::uint32_t bits = 1; bits < sp.num_events(); ++bits) {
    if (is_max_increasing(add, {bits})) ++count;
  }
  CHECK(count == 7);
}

TEST_CASE("critical families") {
  const Scenario sc = fixtures::ccr_verification();
  const StateSpace& sp = sc.space();
  const SetFunction nu = induced_capacity(sc);
  CHECK(critical_family(nu, CriticalMode::kMin) ==
        EventFamily({ev(sp, {"s", "t"}), sp.full_event()}));

  // additive with a zero atom: all events made of positive-mass states
  const SetFunction add = additive(sp, {0.5, 0.5, 0.0});
  CHECK(critical_family(add, CriticalMode::kMin) ==
        EventFamily({ev(sp, {"s"}), ev(sp, {"t"}), ev(sp, {"s", "t"})}));

  // pure min capacity: only the full event
  SetFunction mincap = SetFunction::zeros(StateSpace({"s", "t"}));
  mincap[Event{0b11}] = 1.0;
  CHECK(critical_family(mincap, CriticalMode::kMin) == EventFamily({Event{0b11}}));

  // obfuscation capacity, max mode: same family as the dual's min mode
  const SetFunction nu_obf = induced_capacity(sc.with_model(ModelKind::kObfuscation));
  CHECK(critical_family(nu_obf, CriticalMode::kMax) ==
        EventFamily({ev(sp, {"s", "t"}), sp.full_event()}));
}

TEST_CASE("identification round trip over the corpus") {
  const auto scenarios = corpus::make_corpus(120, ModelKind::kVerification, 301);
  for (const Scenario& sc : scenarios) {
    const SetFunction nu = induced_capacity(sc);
    const IdentificationResult r = recover_structure(nu);

    // positivity: no negative mass anywhere inside the support
    const MobiusVector m = mobius_transform(nu);
    for (std::uint32_t bits = 0; bits < sc.space().num_events(); ++bits) {
      if (Event{bits}.subset_of(m.positive_support())) REQUIRE(m[{bits}] >= -1e-9);
    }

    // union closure equals cl_union of the minimal verifiable events that
    // carry belief mass
    std::vector<Event> minimal;
    for (int s = 0; s < sc.space().size(); ++s) {
      if (sc.beliefs()[s] > 0.0) {
        minimal.push_back(oracle::minimal_covering_event(sc.verifiable().members(), s));
      }
    }
    REQUIRE(r.union_closure == close_under_union(EventFamily(minimal)));

    // critical family = Mobius-positive closure
    REQUIRE(critical_family(nu, CriticalMode::kMin) == r.union_closure);

    // eta rebuild reproduces every act value
    const Scenario again = rebuild(sc, r);
    for (const Act& a : sc.acts()) {
      REQUIRE(again.verification_utility(a) ==
              Catch::Approx(sc.verification_utility(a)).margin(1e-9));
    }
  }
}

TEST_CASE("model values are Choquet integrals of the induced capacity") {
  // The representation in one line: evaluating any act through the model
  // equals integrating its utility vector against the induced capacity.
  std::mt19937_64 rng(305);
  for (ModelKind model : {ModelKind::kVerification, ModelKind::kObfuscation}) {
    for (const Scenario& sc : corpus::make_corpus(40, model, 306)) {
      const SetFunction nu = induced_capacity(sc);
      for (int trial = 0; trial < 8; ++trial) {
        const auto util = oracle::random_payoff(rng, sc.space().size());
        const double direct = model_value(model, sc.verifiable(), sc.beliefs(), util);
        REQUIRE(direct == Catch::Approx(choquet_sort_value(nu, util)).margin(1e-9));
      }
    }
  }
}

TEST_CASE("critical family scales to wider lattices") {
  // A verification capacity on 12 states assembled from a handful of
  // positive-mass events: the critical family is exactly the union closure
  // of those events, and the scan stays fast.
  const int n = 12;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  const StateSpace sp{names};
  MobiusVector m = MobiusVector::zeros(sp);
  // blocks {0..3}, {4..7}, {8..11} plus a nested {0,1}
  m[Event{0x00Fu}] = 0.2;
  m[Event{0x0F0u}] = 0.3;
  m[Event{0xF00u}] = 0.3;
  m[Event{0x003u}] = 0.2;
  const SetFunction nu = zeta_transform(m);
  REQUIRE(nu.is_capacity(1e-12));

  const IdentificationResult r = recover_structure(nu);
  CHECK(r.verifiable_core.size() == 4);
  const EventFamily family = critical_family(nu, CriticalMode::kMin);
  CHECK(family == r.union_closure);
  CHECK(family.contains(Event{0x0FFu}));
  CHECK(family.contains(sp.full_event()));
  CHECK_FALSE(family.contains(Event{0x001u}));
}

TEST_CASE("mobius positivity on randomized larger spaces") {
  // Induced verification capacities keep non-negative mass inside their
  // support on spaces beyond the exhaustive range.
  std::mt19937_64 rng(307);
  std::uniform_int_distribution<int> dim(5, 8);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = dim(rng);
    const Scenario sc = corpus::random_scenario(rng, ModelKind::kVerification, n);
    const MobiusVector m = mobius_transform(induced_capacity(sc));
    const Event support = m.positive_support();
    double worst = 0.0;
    for_each_subset(support.bits, [&](std::uint32_t bits) {
      worst = std::min(worst, m[{bits}]);
    });
    REQUIRE(worst >= -1e-9);
  }
}

TEST_CASE("same preferences up to union closure") {
  const Scenario sc = fixtures::ccr_verification();
  const IdentificationResult r1 = recover_structure(induced_capacity(sc));

  // the eta-rebuilt model is behaviorally identical
  const Scenario eta_sc = rebuild(sc, r1);
  const IdentificationResult r2 = recover_structure(induced_capacity(eta_sc));
  CHECK(same_preferences(r1, sc.beliefs(), r2, eta_sc.beliefs()));

  // a richer family separates the preferences
  const StateSpace& sp = sc.space();
  const Scenario finer =
      sc.with_verifiable(EventFamily({ev(sp, {"s"}), ev(sp, {"s", "t"}), sp.full_event()}));
  const IdentificationResult r3 = recover_structure(induced_capacity(finer));
  CHECK_FALSE(same_preferences(r1, sc.beliefs(), r3, finer.beliefs()));

  // identical inputs
  CHECK(same_preferences(r1, sc.beliefs(), r1, sc.beliefs()));

  // utility comparison up to positive affine transforms
  const std::vector<double> u1 = {0.0, 1.0, 2.0, 5.0};
  const std::vector<double> u2 = {3.0, 5.0, 7.0, 13.0};  // 2*u1 + 3
  const std::vector<double> u3 = {0.0, 1.0, 4.0, 25.0};  // not affine in u1
  CHECK(same_preferences(r1, sc.beliefs(), r1, sc.beliefs(), 1e-9, u1, u2));
  CHECK_FALSE(same_preferences(r1, sc.beliefs(), r1, sc.beliefs(), 1e-9, u1, u3));
}

TEST_CASE("behavioral comparison matches closure inclusion on model pairs") {
  // Enumerated pairs of valid models with identical supports: the
  // trim-indifference implication agrees with closure inclusion.
  std::mt19937_64 rng(303);
  const StateSpace sp = corpus::space_of(3);
  for (int trial = 0; trial < 60; ++trial) {
    const auto beliefs = oracle::random_simplex(rng, 3, 0.05);
    const Scenario a(sp, corpus::random_acts(rng, 3, 1), UtilitySpec::identity(), beliefs,
                     corpus::random_pi_system(rng, sp), ModelKind::kVerification);
    const Scenario b = a.with_verifiable(corpus::random_pi_system(rng, sp));
    const SetFunction nu1 = induced_capacity(a);
    const SetFunction nu2 = induced_capacity(b);
    const IdentificationResult r1 = recover_structure(nu1);
    const IdentificationResult r2 = recover_structure(nu2);

    const bool closure_subset = r1.union_closure.subset_of(r2.union_closure);
    bool behavioral = true;
    for (std::uint32_t e = 0; e < sp.num_events() && behavioral; ++e) {
      for_each_subset(e, [&](std::uint32_t f) {
        if (f == 0 || !behavioral) return;
        const Event ev1{e}, trimmed{e & ~f};
        if (std::fabs(nu2[ev1] - nu2[trimmed]) <= 1e-9 &&
            std::fabs(nu1[ev1] - nu1[trimmed]) > 1e-9) {
          behavioral = false;
        }
      });
    }
    REQUIRE(closure_subset == behavioral);
  }
}
