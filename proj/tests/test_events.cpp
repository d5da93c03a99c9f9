#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "veridec/events.hpp"

#include "oracles.hpp"

using namespace veridec;

namespace {

StateSpace stu() { return StateSpace({"s", "t", "u"}); }

Event ev(const StateSpace& space, std::initializer_list<const char*> labels) {
  Event e;
  for (const char* l : labels) e.bits |= 1u << space.index_of(l);
  return e;
}

EventFamily fam(std::initializer_list<Event> events) {
  return EventFamily(std::vector<Event>(events));
}

}  // namespace

TEST_CASE("state space validation") {
  CHECK_THROWS_AS(StateSpace({}), ValidationError);
  CHECK_THROWS_AS(StateSpace({"s", "s"}), ValidationError);
  CHECK_THROWS_AS(StateSpace({"s", ""}), ValidationError);
  CHECK_THROWS_AS(StateSpace(std::vector<std::string>(17, "x")), ValidationError);
  const StateSpace sp = stu();
  CHECK(sp.size() == 3);
  CHECK(sp.index_of("u") == 2);
  CHECK(sp.full_event().bits == 0b111u);
  CHECK_THROWS_AS(sp.index_of("w"), ValidationError);
}

TEST_CASE("event boolean algebra, exhaustive truth tables") {
  for (int n = 1; n <= 4; ++n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, char('a' + i)));
    const StateSpace sp{names};
    const std::uint32_t full = sp.full_mask();
    for (std::uint32_t a = 0; a <= full; ++a) {
      for (std::uint32_t b = 0; b <= full; ++b) {
        const Event ea{a}, eb{b};
        CHECK((ea | eb).bits == (eb | ea).bits);
        CHECK((ea & eb).bits == (eb & ea).bits);
        CHECK(sp.complement(ea | eb) == (sp.complement(ea) & sp.complement(eb)));
        CHECK(sp.complement(ea & eb) == (sp.complement(ea) | sp.complement(eb)));
        CHECK((ea - eb) == (ea & sp.complement(eb)));
        CHECK(((ea & eb) | (ea - eb)) == ea);
        CHECK(sp.complement(sp.complement(ea)) == ea);
      }
    }
  }
}

TEST_CASE("canonical family order") {
  const StateSpace sp = stu();
  const EventFamily a = fam({ev(sp, {"s", "t"}), ev(sp, {"t"}), ev(sp, {"s"})});
  const EventFamily b = fam({ev(sp, {"s"}), ev(sp, {"s", "t"}), ev(sp, {"t"}), ev(sp, {"t"})});
  REQUIRE(a == b);
  // popcount ascending, then numeric.
  CHECK(a.members()[0] == ev(sp, {"s"}));
  CHECK(a.members()[1] == ev(sp, {"t"}));
  CHECK(a.members()[2] == ev(sp, {"s", "t"}));
}

TEST_CASE("close_under_intersection examples") {
  const StateSpace sp = stu();
  // one forced intersection
  CHECK(close_under_intersection(fam({ev(sp, {"s", "t"}), ev(sp, {"t", "u"})})) ==
        fam({ev(sp, {"s", "t"}), ev(sp, {"t", "u"}), ev(sp, {"t"})}));
  // already a pi-system
  CHECK(close_under_intersection(fam({ev(sp, {"s", "t"}), ev(sp, {"s", "t", "u"})})) ==
        fam({ev(sp, {"s", "t"}), ev(sp, {"s", "t", "u"})}));
  // disjoint events force the empty event in
  CHECK(close_under_intersection(fam({ev(sp, {"s"}), ev(sp, {"t"})})) ==
        fam({ev(sp, {"s"}), ev(sp, {"t"}), kEmptyEvent}));
  CHECK_THROWS_AS(close_under_intersection(EventFamily{}), ValidationError);
}

TEST_CASE("close_under_union examples") {
  const StateSpace sp = stu();
  CHECK(close_under_union(fam({ev(sp, {"s"}), ev(sp, {"t"})})) ==
        fam({ev(sp, {"s"}), ev(sp, {"t"}), ev(sp, {"s", "t"})}));
  CHECK(close_under_union(fam({ev(sp, {"s", "t", "u"})})) == fam({ev(sp, {"s", "t", "u"})}));
  const EventFamily all_singletons = fam({ev(sp, {"s"}), ev(sp, {"t"}), ev(sp, {"u"})});
  CHECK(close_under_union(all_singletons).size() == 7);  // every non-empty subset
}

TEST_CASE("closures match the fixed-point oracle and are idempotent") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 4; ++n) {
    const std::uint32_t full = (1u << n) - 1u;
    std::uniform_int_distribution<std::uint32_t> mask(0, full);
    std::uniform_int_distribution<int> count(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Event> members;
      const int k = count(rng);
      for (int i = 0; i < k; ++i) members.push_back({mask(rng)});
      const EventFamily family{members};

      const EventFamily ci = close_under_intersection(family);
      const EventFamily cu = close_under_union(family);
      CHECK(ci == oracle::close_fixed_point(family, false));
      CHECK(cu == oracle::close_fixed_point(family, true));
      CHECK(close_under_intersection(ci) == ci);
      CHECK(close_under_union(cu) == cu);
      // |cl_union(F)| <= 2^n - 1 + (1 if empty in F)
      const std::size_t bound = (1u << n) - 1 + (family.contains_empty() ? 1 : 0);
      CHECK(cu.size() <= bound);
    }
  }
}

TEST_CASE("is_pi_system_with_support") {
  const StateSpace sp = stu();
  const Event full = sp.full_event();
  CHECK(is_pi_system_with_support(fam({ev(sp, {"s", "t"}), full}), full));
  CHECK_FALSE(is_pi_system_with_support(fam({ev(sp, {"s", "t"}), ev(sp, {"t", "u"})}), full));
  CHECK(is_pi_system_with_support(fam({kEmptyEvent, full}), full));
  // intersection-closed but missing the support member
  CHECK_FALSE(is_pi_system_with_support(fam({ev(sp, {"s", "t"}), ev(sp, {"t"})}), full));
}
