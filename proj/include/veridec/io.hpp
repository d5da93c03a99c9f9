#pragma once

// JSON ingestion and report serialization.
//
// Scenario file:
//   {"states": ["s","t","u"],
//    "acts": {"Trees": {"s":70,"t":70,"u":10}, ...},
//    "utility": {"kind":"identity"} | {"kind":"power","exponent":0.5}
//             | {"kind":"table","map":{"10":1,"40":2,...}},
//    "beliefs": {"s":0.2,"t":0.6,"u":0.2},
//    "verifiable": [["s","t"],["s","t","u"]],
//    "model": "verification" | "obfuscation" | "expected_utility",
//    "tolerance": 1e-9}            (optional)
//
// Capacity file:
//   {"states": [...], "values": {"s":0,...,"s,t":0.8,...,"s,t,u":1}}
//   Every non-empty subset must appear; "" is the implied empty set at 0.
//
// Events serialize as arrays of state labels in state-space order; families
// as arrays of events in canonical order, so equal families are
// byte-identical.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "veridec/axioms.hpp"
#include "veridec/decision.hpp"
#include "veridec/errors.hpp"
#include "veridec/events.hpp"
#include "veridec/identification.hpp"
#include "veridec/set_function.hpp"
#include "veridec/welfare.hpp"

namespace veridec {

using nlohmann::json;

namespace detail {

inline const json& require_field(const json& j, const std::string& key,
                                 const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(path.empty() ? key + ": missing field" : path + "." + key +
                                             ": missing field");
  }
  return j.at(key);
}

inline double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path + ": expected a number");
  return j.get<double>();
}

}  // namespace detail

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return j;
}

inline StateSpace load_states(const json& j) {
  const json& states = detail::require_field(j, "states", "");
  if (!states.is_array()) throw ValidationError("states: expected an array of labels");
  std::vector<std::string> names;
  for (const auto& s : states) {
    if (!s.is_string()) throw ValidationError("states: labels must be strings");
    names.push_back(s.get<std::string>());
  }
  return StateSpace(std::move(names));
}

inline Event load_event(const json& j, const StateSpace& space, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path + ": expected an array of state labels");
  Event e;
  for (const auto& label : j) {
    if (!label.is_string()) throw ValidationError(path + ": labels must be strings");
    e.bits |= 1u << space.index_of(label.get<std::string>());
  }
  return e;
}

inline EventFamily load_family(const json& j, const StateSpace& space,
                               const std::string& path = "verifiable") {
  if (!j.is_array()) throw ValidationError(path + ": expected an array of events");
  std::vector<Event> members;
  for (std::size_t i = 0; i < j.size(); ++i) {
    members.push_back(load_event(j[i], space, path + "[" + std::to_string(i) + "]"));
  }
  return EventFamily(std::move(members));
}

inline std::vector<double> load_state_vector(const json& j, const StateSpace& space,
                                             const std::string& path) {
  if (!j.is_object()) throw ValidationError(path + ": expected an object keyed by state label");
  std::vector<double> v(space.size(), 0.0);
  std::vector<bool> seen(space.size(), false);
  for (const auto& [key, value] : j.items()) {
    const int i = space.index_of(key);
    seen[i] = true;
    v[i] = detail::require_number(value, path + "." + key);
  }
  for (int i = 0; i < space.size(); ++i) {
    if (!seen[i]) throw ValidationError(path + "." + space.name(i) + ": missing entry");
  }
  return v;
}

inline UtilitySpec load_utility(const json& j) {
  const std::string kind = detail::require_field(j, "kind", "utility").get<std::string>();
  if (kind == "identity") return UtilitySpec::identity();
  if (kind == "power") {
    return UtilitySpec::power(
        detail::require_number(detail::require_field(j, "exponent", "utility"),
                               "utility.exponent"));
  }
  if (kind == "table") {
    const json& map = detail::require_field(j, "map", "utility");
    if (!map.is_object()) throw ValidationError("utility.map: expected an object");
    std::map<double, double> table;
    for (const auto& [key, value] : map.items()) {
      double x;
      try {
        x = std::stod(key);
      } catch (...) {
        throw ValidationError("utility.map: key '" + key + "' is not a number");
      }
      table[x] = detail::require_number(value, "utility.map." + key);
    }
    return UtilitySpec::table(std::move(table));
  }
  throw ValidationError("utility.kind: expected identity, power, or table");
}

inline ModelKind parse_model(const std::string& name) {
  if (name == "verification") return ModelKind::kVerification;
  if (name == "obfuscation") return ModelKind::kObfuscation;
  if (name == "expected_utility") return ModelKind::kExpectedUtility;
  throw ValidationError("model: expected verification, obfuscation, or expected_utility");
}

inline std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::kVerification:
      return "verification";
    case ModelKind::kObfuscation:
      return "obfuscation";
    case ModelKind::kExpectedUtility:
      return "expected_utility";
  }
  return "";
}

inline Scenario load_scenario(const json& j) {
  const StateSpace space = load_states(j);
  const json& acts_json = detail::require_field(j, "acts", "");
  if (!acts_json.is_object() || acts_json.empty()) {
    throw ValidationError("acts: expected a non-empty object of acts");
  }
  std::vector<Act> acts;
  for (const auto& [name, payoff] : acts_json.items()) {
    acts.push_back(Act{name, load_state_vector(payoff, space, "acts." + name)});
  }
  const UtilitySpec utility = load_utility(detail::require_field(j, "utility", ""));
  std::vector<double> beliefs =
      load_state_vector(detail::require_field(j, "beliefs", ""), space, "beliefs");
  EventFamily family = load_family(detail::require_field(j, "verifiable", ""), space);
  const ModelKind model =
      parse_model(detail::require_field(j, "model", "").get<std::string>());
  double tolerance = kValueTol;
  if (j.contains("tolerance")) {
    tolerance = detail::require_number(j.at("tolerance"), "tolerance");
  }
  return Scenario(space, std::move(acts), utility, std::move(beliefs), std::move(family), model,
                  tolerance);
}

inline Scenario load_scenario_file(const std::string& path) {
  return load_scenario(load_json_file(path));
}

inline std::string event_key(const StateSpace& space, Event e) {
  std::string key;
  for (int i = 0; i < space.size(); ++i) {
    if (!e.contains(i)) continue;
    if (!key.empty()) key += ",";
    key += space.name(i);
  }
  return key;
}

inline SetFunction load_capacity(const json& j) {
  const StateSpace space = load_states(j);
  for (const auto& name : space.names()) {
    if (name.find(',') != std::string::npos) {
      throw ValidationError("states: labels in capacity files must not contain ','");
    }
  }
  const json& values = detail::require_field(j, "values", "");
  if (!values.is_object()) throw ValidationError("values: expected an object");
  SetFunction f = SetFunction::zeros(space);
  std::vector<bool> seen(space.num_events(), false);
  seen[0] = true;
  for (const auto& [key, value] : values.items()) {
    Event e;
    if (!key.empty()) {
      std::stringstream ss(key);
      std::string label;
      while (std::getline(ss, label, ',')) e.bits |= 1u << space.index_of(label);
    }
    const double v = detail::require_number(value, "values." + key);
    if (e.empty() && std::fabs(v) > kValidityTol) {
      throw ValidationError("values: the empty set must carry value 0");
    }
    seen[e.bits] = true;
    f[e] = v;
  }
  for (std::uint32_t s = 1; s < space.num_events(); ++s) {
    if (!seen[s]) {
      throw ValidationError("values." + event_key(space, {s}) + ": missing subset entry");
    }
  }
  return f;
}

inline SetFunction load_capacity_file(const std::string& path) {
  return load_capacity(load_json_file(path));
}

// ---------------------------------------------------------------------------
// Serialization. Events in state-space order, families in canonical order,
// so identical inputs render byte-identically.

inline json event_to_json(const StateSpace& space, Event e) {
  json out = json::array();
  for (int i = 0; i < space.size(); ++i) {
    if (e.contains(i)) out.push_back(space.name(i));
  }
  return out;
}

inline json family_to_json(const StateSpace& space, const EventFamily& family) {
  json out = json::array();
  for (Event e : family) out.push_back(event_to_json(space, e));
  return out;
}

inline json capacity_to_json(const SetFunction& f) {
  json values = json::object();
  for (std::uint32_t s = 1; s < f.space().num_events(); ++s) {
    values[event_key(f.space(), {s})] = f[{s}];
  }
  return json{{"states", f.space().names()}, {"values", values}};
}

inline json identification_to_json(const StateSpace& space, const IdentificationResult& r) {
  json phi = json::object();
  json eta = json::object();
  for (int i = 0; i < space.size(); ++i) {
    if (!r.irrelevant_states.contains(i)) {
      phi[space.name(i)] = event_to_json(space, r.phi[i]);
      eta[space.name(i)] = r.eta[i];
    }
  }
  return json{{"verifiable_core", family_to_json(space, r.verifiable_core)},
              {"union_closure", family_to_json(space, r.union_closure)},
              {"phi", phi},
              {"eta", eta},
              {"irrelevant_states", event_to_json(space, r.irrelevant_states)}};
}

inline json witness_to_json(const StateSpace& space, const AxiomWitness& w) {
  json out{{"kind", w.kind}};
  if (!w.events.empty()) {
    json events = json::array();
    for (Event e : w.events) events.push_back(event_to_json(space, e));
    out["events"] = events;
  }
  if (!w.payoffs.empty()) out["payoffs"] = w.payoffs;
  if (!w.values.empty()) out["values"] = w.values;
  return out;
}

inline json axiom_report_to_json(const StateSpace& space, const AxiomReport& r) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(witness_to_json(space, w));
  json out{{"axiom", r.axiom},
           {"holds", r.holds},
           {"witnesses", witnesses},
           {"samples_checked", r.samples_checked},
           {"seed", r.seed}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

inline json loss_report_to_json(const LossReport& r) {
  json out{{"eu_best", r.eu_best},
           {"eu_best_value", r.eu_best_value},
           {"model_best", r.model_best},
           {"model_best_value", r.model_best_value},
           {"model_best_eu", r.model_best_eu},
           {"loss", r.loss}};
  if (r.transparency_delta) out["transparency_delta"] = *r.transparency_delta;
  return out;
}

}  // namespace veridec
