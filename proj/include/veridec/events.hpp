#pragma once

// Finite state spaces, events as bitmasks, and event families with the
// closure operators used to normalize families of verifiable events.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "veridec/errors.hpp"

namespace veridec {

// A subset of state indices, packed into a machine word. State i is a
// member iff bit i is set. Spaces are capped at 16 states, so uint32_t
// leaves ample headroom.
struct Event {
  std::uint32_t bits = 0;

  constexpr bool empty() const { return bits == 0; }
  constexpr int size() const { return std::popcount(bits); }
  constexpr bool contains(int state) const { return (bits >> state) & 1u; }
  constexpr bool subset_of(Event other) const { return (bits & ~other.bits) == 0; }
  constexpr bool intersects(Event other) const { return (bits & other.bits) != 0; }

  friend constexpr Event operator|(Event a, Event b) { return {a.bits | b.bits}; }
  friend constexpr Event operator&(Event a, Event b) { return {a.bits & b.bits}; }
  // Set difference a - b.
  friend constexpr Event operator-(Event a, Event b) { return {a.bits & ~b.bits}; }
  friend constexpr bool operator==(Event a, Event b) { return a.bits == b.bits; }

  // Canonical order: popcount ascending, then numeric value ascending.
  // Makes equal families byte-identical when serialized.
  friend constexpr bool operator<(Event a, Event b) {
    const int pa = std::popcount(a.bits);
    const int pb = std::popcount(b.bits);
    return pa != pb ? pa < pb : a.bits < b.bits;
  }
};

constexpr Event kEmptyEvent{0};

inline Event singleton(int state) { return {1u << state}; }

class StateSpace {
 public:
  static constexpr int kMaxStates = 16;

  explicit StateSpace(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty() || names_.size() > kMaxStates) {
      throw ValidationError("states: need between 1 and 16 state labels, got " +
                            std::to_string(names_.size()));
    }
    for (const auto& name : names_) {
      if (name.empty()) throw ValidationError("states: empty label");
    }
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("states: duplicate label");
    }
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }

  int index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i) {
      if (names_[i] == label) return i;
    }
    throw ValidationError("unknown state label: " + label);
  }

  Event full_event() const { return {full_mask()}; }
  std::uint32_t full_mask() const { return (1u << size()) - 1u; }
  std::uint32_t num_events() const { return 1u << size(); }

  Event complement(Event e) const { return {~e.bits & full_mask()}; }

  bool contains_event(Event e) const { return (e.bits & ~full_mask()) == 0; }

  friend bool operator==(const StateSpace& a, const StateSpace& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
};

// A deduplicated family of events in canonical order.
class EventFamily {
 public:
  EventFamily() = default;

  explicit EventFamily(std::vector<Event> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  const std::vector<Event>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  bool contains(Event e) const {
    return std::binary_search(members_.begin(), members_.end(), e,
                              [](Event a, Event b) { return a < b; });
  }

  bool contains_empty() const { return !members_.empty() && members_.front().empty(); }

  // Member-wise inclusion.
  bool subset_of(const EventFamily& other) const {
    return std::all_of(members_.begin(), members_.end(),
                       [&](Event e) { return other.contains(e); });
  }

  friend bool operator==(const EventFamily& a, const EventFamily& b) {
    return a.members_ == b.members_;
  }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  std::vector<Event> members_;
};

namespace detail {

template <typename Combine>
EventFamily close_under(const EventFamily& family, Combine combine) {
  if (family.empty()) throw ValidationError("closure of an empty family");
  std::set<std::uint32_t> closed;
  for (Event e : family) closed.insert(e.bits);
  std::vector<std::uint32_t> frontier(closed.begin(), closed.end());
  while (!frontier.empty()) {
    std::vector<std::uint32_t> added;
    for (std::uint32_t a : frontier) {
      for (std::uint32_t b : closed) {
        const std::uint32_t c = combine(a, b);
        if (closed.insert(c).second) added.push_back(c);
      }
    }
    frontier = std::move(added);
  }
  std::vector<Event> members;
  members.reserve(closed.size());
  for (std::uint32_t bits : closed) members.push_back({bits});
  return EventFamily(std::move(members));
}

}  // namespace detail

// Smallest superset closed under pairwise intersection. Idempotent.
inline EventFamily close_under_intersection(const EventFamily& family) {
  return detail::close_under(family, [](std::uint32_t a, std::uint32_t b) { return a & b; });
}

// Smallest superset closed under pairwise union. Idempotent.
inline EventFamily close_under_union(const EventFamily& family) {
  return detail::close_under(family, [](std::uint32_t a, std::uint32_t b) { return a | b; });
}

// True iff `family` is intersection-closed and has `support` as a member.
inline bool is_pi_system_with_support(const EventFamily& family, Event support) {
  if (!family.contains(support)) return false;
  const auto& m = family.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (!family.contains(m[i] & m[j])) return false;
    }
  }
  return true;
}

// All subsets of `mask`, emitted in decreasing numeric order of submask
// (standard subset-enumeration loop), including mask itself and 0.
template <typename Fn>
void for_each_subset(std::uint32_t mask, Fn fn) {
  std::uint32_t sub = mask;
  while (true) {
    fn(sub);
    if (sub == 0) break;
    sub = (sub - 1) & mask;
  }
}

}  // namespace veridec
