#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "des/alphabet.hpp"
#include "des/coordination.hpp"
#include "des/errors.hpp"
#include "des/generator.hpp"
#include "des/ops.hpp"
#include "des/properties.hpp"

// Text documents for generators and reports.
//
// A generator document is line oriented:
//
//   name: buffer
//   events: fill empty:u probe:u:uo
//   states: s0 s1
//   initial: s0
//   marked: s0
//   trans:
//   s0 fill s1
//   s1 empty s0
//
// `#` starts a comment. Event entries take the optional flag suffixes
// `:c` / `:u` (controllable — the default — or uncontrollable) and `:o` /
// `:uo` (observable — the default — or unobservable). Sections may appear
// in any order, each at most once; every line outside the `trans:` section
// must be a section header. A document without states describes the empty
// language over the declared events.

namespace des {

// A parsed generator document: the generator plus its display name and the
// state names, parallel to the state indices.
struct GeneratorDoc {
  std::string name = "g";
  std::vector<std::string> state_names;
  Generator gen;
};

namespace detail {

inline std::vector<std::string> tokens_of(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() &&
           std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

inline Event parse_event_entry(const std::string& entry, int line) {
  Event e;
  std::size_t colon = entry.find(':');
  e.name = entry.substr(0, colon);
  if (!valid_symbol(e.name))
    throw ParseError(line, "invalid event name '" + e.name + "'");
  bool saw_control = false;
  bool saw_observe = false;
  while (colon != std::string::npos) {
    std::size_t next = entry.find(':', colon + 1);
    std::string flag = entry.substr(colon + 1, next - (colon + 1));
    bool control = flag == "c" || flag == "u";
    bool observe = flag == "o" || flag == "uo";
    if (!control && !observe)
      throw ParseError(line, "unknown event flag ':" + flag + "'");
    if ((control && saw_control) || (observe && saw_observe))
      throw ParseError(line, "repeated event flag ':" + flag + "'");
    if (control) {
      e.controllable = flag == "c";
      saw_control = true;
    } else {
      e.observable = flag == "o";
      saw_observe = true;
    }
    colon = next;
  }
  return e;
}

}  // namespace detail

inline GeneratorDoc parse_generator(const std::string& text) {
  GeneratorDoc doc;
  std::vector<Event> events;
  std::vector<std::string> states;
  std::optional<std::string> initial;
  std::vector<std::pair<std::string, int>> marked;        // name, line
  std::vector<std::pair<std::vector<std::string>, int>> triples;  // tokens, line
  bool saw_name = false;

  std::set<std::string> seen_sections;
  bool in_trans = false;
  std::istringstream stream(text);
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::vector<std::string> toks = detail::tokens_of(raw);
    if (toks.empty()) continue;

    std::string section;
    if (!toks[0].empty() && toks[0].back() == ':' &&
        toks[0].find(':') == toks[0].size() - 1) {
      section = toks[0].substr(0, toks[0].size() - 1);
    }
    static const std::set<std::string> kSections{"name",    "events", "states",
                                                 "initial", "marked", "trans"};
    if (kSections.count(section)) {
      if (!seen_sections.insert(section).second)
        throw ParseError(line, "duplicate section '" + section + ":'");
      std::vector<std::string> rest(toks.begin() + 1, toks.end());
      in_trans = false;
      if (section == "name") {
        if (rest.size() != 1)
          throw ParseError(line, "expected exactly one name");
        doc.name = rest[0];
        saw_name = true;
      } else if (section == "events") {
        for (const std::string& entry : rest)
          events.push_back(detail::parse_event_entry(entry, line));
      } else if (section == "states") {
        for (const std::string& s : rest) {
          if (!detail::valid_symbol(s))
            throw ParseError(line, "invalid state name '" + s + "'");
          states.push_back(s);
        }
      } else if (section == "initial") {
        if (rest.size() != 1)
          throw ParseError(line, "expected exactly one initial state");
        initial = rest[0];
      } else if (section == "marked") {
        for (const std::string& s : rest) marked.emplace_back(s, line);
      } else {  // trans
        if (!rest.empty())
          throw ParseError(line,
                           "transitions belong on their own lines after "
                           "'trans:'");
        in_trans = true;
      }
      continue;
    }
    if (!in_trans)
      throw ParseError(line, "expected a section header");
    if (toks.size() != 3)
      throw ParseError(line, "expected 'source event target'");
    triples.emplace_back(std::move(toks), line);
  }
  if (!saw_name) doc.name = "g";

  std::set<std::string> event_names;
  for (const Event& e : events)
    if (!event_names.insert(e.name).second)
      throw ValidationError("duplicate event '" + e.name + "'");
  Alphabet alphabet(events);

  std::map<std::string, int> state_index;
  for (const std::string& s : states)
    if (!state_index.emplace(s, static_cast<int>(state_index.size())).second)
      throw ValidationError("duplicate state '" + s + "'");

  if (states.empty()) {
    if (initial) throw ValidationError("initial state given but no states");
    if (!marked.empty())
      throw ValidationError("marked states given but no states");
    if (!triples.empty())
      throw ValidationError("transitions given but no states");
    doc.gen = Generator(std::move(alphabet));
    return doc;
  }
  if (!initial) throw ValidationError("missing initial state");
  auto index_of_state = [&](const std::string& s) {
    auto it = state_index.find(s);
    if (it == state_index.end())
      throw ValidationError("unknown state '" + s + "'");
    return it->second;
  };

  std::vector<bool> marks(states.size(), false);
  for (const auto& [s, l] : marked)
    marks[static_cast<std::size_t>(index_of_state(s))] = true;

  std::vector<Generator::Transition> transitions;
  std::set<std::pair<int, int>> deterministic;
  for (const auto& [toks, l] : triples) {
    int src = index_of_state(toks[0]);
    int ev = alphabet.index_of(toks[1]);
    if (ev < 0) throw ValidationError("unknown event '" + toks[1] + "'");
    int dst = index_of_state(toks[2]);
    if (!deterministic.emplace(src, ev).second)
      throw ValidationError("nondeterministic: two transitions from '" +
                            toks[0] + "' on '" + toks[1] + "'");
    transitions.push_back({src, ev, dst});
  }

  doc.state_names = states;
  doc.gen = Generator(std::move(alphabet), static_cast<int>(states.size()),
                      index_of_state(*initial), std::move(marks), transitions);
  return doc;
}

// Deterministic text form of a document: sections in a fixed order, events
// and states in declaration order, transitions grouped by source state with
// events in name order, non-default attribute flags only.
inline std::string serialize_generator(const GeneratorDoc& doc) {
  const Generator& g = doc.gen;
  if (static_cast<int>(doc.state_names.size()) != g.state_count())
    throw PreconditionViolated("state name list does not match the states");
  std::string out = "name: " + doc.name + "\n";
  out += "events:";
  for (const Event& e : g.alphabet().events()) {
    out += ' ' + e.name;
    if (!e.controllable) out += ":u";
    if (!e.observable) out += ":uo";
  }
  out += '\n';
  out += "states:";
  for (const std::string& s : doc.state_names) out += ' ' + s;
  out += '\n';
  if (!g.empty()) out += "initial: " + doc.state_names[static_cast<std::size_t>(g.initial())] + '\n';
  out += "marked:";
  for (int s = 0; s < g.state_count(); ++s)
    if (g.is_marked(s)) out += ' ' + doc.state_names[static_cast<std::size_t>(s)];
  out += '\n';
  out += "trans:\n";
  for (int s = 0; s < g.state_count(); ++s)
    for (const auto& [e, t] : g.out(s))
      out += doc.state_names[static_cast<std::size_t>(s)] + ' ' +
             g.alphabet().at(e).name + ' ' +
             doc.state_names[static_cast<std::size_t>(t)] + '\n';
  return out;
}

// As above with generated state names s0, s1, ... (state indices are in
// breadth-first order for every generator this library produces).
inline std::string serialize_generator(const Generator& g,
                                       const std::string& name = "g") {
  GeneratorDoc doc;
  doc.name = name;
  doc.gen = g;
  for (int s = 0; s < g.state_count(); ++s)
    doc.state_names.push_back("s" + std::to_string(s));
  return serialize_generator(doc);
}

// One-line human rendering of a verdict.
inline std::string verdict_text(const PropertyVerdict& v) {
  if (v.holds) return "holds";
  std::string out = "fails";
  if (!v.witness) return out;
  out += ": " + v.witness->detail;
  for (std::size_t i = 0; i < v.witness->words.size(); ++i)
    out += " | word " + std::to_string(i + 1) + ": " +
           to_string(v.witness->words[i]);
  if (v.witness->event) out += " | event: " + v.witness->event->name;
  return out;
}

inline nlohmann::ordered_json verdict_json(const PropertyVerdict& v) {
  nlohmann::ordered_json j;
  j["holds"] = v.holds;
  if (v.witness) {
    nlohmann::ordered_json w;
    w["words"] = nlohmann::ordered_json::array();
    for (const Word& word : v.witness->words) {
      nlohmann::ordered_json entry = nlohmann::ordered_json::array();
      for (const EventId& e : word) entry.push_back(e.name);
      w["words"].push_back(std::move(entry));
    }
    if (v.witness->event) w["event"] = v.witness->event->name;
    w["detail"] = v.witness->detail;
    j["witness"] = std::move(w);
  }
  return j;
}

inline const char* outcome_name(PipelineOutcome outcome) {
  switch (outcome) {
    case PipelineOutcome::supremal_full_observation:
      return "supremal_full_observation";
    case PipelineOutcome::supremal_partial_observation:
      return "supremal_partial_observation";
    case PipelineOutcome::posterior_supervisor:
      return "posterior_supervisor";
    case PipelineOutcome::nonconflicting_failed:
      return "nonconflicting_failed";
  }
  return "unknown";
}

namespace detail {

inline std::string generator_summary(const Generator& g) {
  int marked = 0;
  for (int s = 0; s < g.state_count(); ++s)
    if (g.is_marked(s)) ++marked;
  return std::to_string(g.state_count()) + " states (" +
         std::to_string(marked) + " marked)";
}

}  // namespace detail

// Human-readable pipeline summary, one aspect per line.
inline std::string report_text(const SynthesisReport& r) {
  std::string out;
  out += std::string("outcome: ") + outcome_name(r.outcome) + '\n';
  out += std::string("supremal: ") + (r.supremal ? "yes" : "no") + '\n';
  out += "coordinator: " + detail::generator_summary(r.coordinator) + '\n';
  for (int i = 0; i < 2; ++i)
    out += "local spec " + std::to_string(i + 1) + ": " +
           detail::generator_summary(r.local_specs[static_cast<std::size_t>(i)]) +
           '\n';
  for (int i = 0; i < 2; ++i)
    out += "local supervisor " + std::to_string(i + 1) + ": " +
           detail::generator_summary(
               r.local_supervisors[static_cast<std::size_t>(i)]) +
           '\n';
  out += "nonconflicting: " + verdict_text(r.nonconflicting) + '\n';
  out += "projected intersection: " +
         detail::generator_summary(r.pk_intersection) + '\n';
  out += "coordinator condition: " + verdict_text(r.pk_condition) + '\n';
  if (r.posterior_supervisor)
    out += "posterior supervisor: " +
           detail::generator_summary(*r.posterior_supervisor) + '\n';
  if (r.result)
    out += "result: " + detail::generator_summary(*r.result) + '\n';
  else
    out += "result: absent\n";
  return out;
}

// Machine-readable pipeline report. Every language is embedded as a
// serialized generator document.
inline std::string report_json(const SynthesisReport& r) {
  nlohmann::ordered_json j;
  j["outcome"] = outcome_name(r.outcome);
  j["supremal"] = r.supremal;
  j["coordinator"] = serialize_generator(r.coordinator, "coordinator");
  j["local_specs"] = {serialize_generator(r.local_specs[0], "spec1"),
                      serialize_generator(r.local_specs[1], "spec2")};
  j["local_supervisors"] = {
      serialize_generator(r.local_supervisors[0], "supervisor1"),
      serialize_generator(r.local_supervisors[1], "supervisor2")};
  j["nonconflicting"] = verdict_json(r.nonconflicting);
  j["pk_intersection"] =
      serialize_generator(r.pk_intersection, "pk_intersection");
  j["pk_condition"] = verdict_json(r.pk_condition);
  if (r.posterior_supervisor)
    j["posterior_supervisor"] =
        serialize_generator(*r.posterior_supervisor, "posterior");
  else
    j["posterior_supervisor"] = nullptr;
  if (r.result)
    j["result"] = serialize_generator(*r.result, "result");
  else
    j["result"] = nullptr;
  return j.dump(2) + "\n";
}

}  // namespace des
