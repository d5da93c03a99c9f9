#pragma once

// The carbon-reduction-programs worked example, used all over the suite:
// three acts (Trees 70/70/10, RECs 60/100/10, Efficiency 40/40/40) on
// states {s,t,u}.

#include <initializer_list>
#include <vector>

#include "veridec/decision.hpp"
#include "veridec/events.hpp"

namespace fixtures {

using veridec::Act;
using veridec::Event;
using veridec::EventFamily;
using veridec::ModelKind;
using veridec::Scenario;
using veridec::StateSpace;
using veridec::UtilitySpec;

inline StateSpace ccr_space() { return StateSpace({"s", "t", "u"}); }

inline Event ev(const StateSpace& space, std::initializer_list<const char*> labels) {
  Event e;
  for (const char* l : labels) e.bits |= 1u << space.index_of(l);
  return e;
}

inline std::vector<Act> ccr_acts() {
  return {Act{"Trees", {70, 70, 10}}, Act{"RECs", {60, 100, 10}},
          Act{"Efficiency", {40, 40, 40}}};
}

// Verifiable family {{s,t},{s,t,u}}; beliefs (0.2,0.6,0.2).
inline Scenario ccr_verification() {
  const StateSpace sp = ccr_space();
  return Scenario(sp, ccr_acts(), UtilitySpec::identity(), {0.2, 0.6, 0.2},
                  EventFamily({ev(sp, {"s", "t"}), sp.full_event()}),
                  ModelKind::kVerification);
}

// The obfuscation variant additionally treats {u} as provable.
inline Scenario ccr_obfuscation() {
  const StateSpace sp = ccr_space();
  return Scenario(sp, ccr_acts(), UtilitySpec::identity(), {0.2, 0.6, 0.2},
                  EventFamily({ev(sp, {"s", "t"}), ev(sp, {"u"}), sp.full_event()}),
                  ModelKind::kObfuscation);
}

inline EventFamily all_nonempty(const StateSpace& sp) {
  std::vector<Event> members;
  for (std::uint32_t s = 1; s < sp.num_events(); ++s) members.push_back({s});
  return EventFamily(members);
}

}  // namespace fixtures
