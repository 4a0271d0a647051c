#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "des/des.hpp"

// Word-level reference implementations used to validate the library. Every
// oracle here works on explicit finite word sets, so a disagreement always
// implicates the automaton code path under test (or a misreading of a
// definition), never shared machinery. All randomized generators are
// acyclic, which keeps the languages finite and the oracles exact.

namespace testutil {

using Lang = std::set<des::Word>;
using Names = std::set<std::string>;

// ---------------------------------------------------------------- words --

// "a1 a2 u" -> Word{a1,a2,u}; "" -> the empty word.
inline des::Word wd(const std::string& spaced) {
  des::Word w;
  std::istringstream in(spaced);
  std::string tok;
  while (in >> tok) w.push_back(des::EventId(tok));
  return w;
}

inline Lang lang(std::initializer_list<std::string> words) {
  Lang out;
  for (const auto& w : words) out.insert(wd(w));
  return out;
}

inline bool lenlex_less(const des::Word& a, const des::Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline des::Word append(des::Word w, const std::string& event) {
  w.push_back(des::EventId(event));
  return w;
}

inline bool is_prefix(const des::Word& p, const des::Word& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

// ---------------------------------------------------- language building --

inline Lang closure_of(const Lang& l) {
  Lang out;
  for (const des::Word& w : l)
    for (std::size_t n = 0; n <= w.size(); ++n)
      out.insert(des::Word(w.begin(), w.begin() + static_cast<long>(n)));
  return out;
}

// Trie acceptor marking exactly the given words; trim, so its generated
// language is the prefix closure of `marked`.
inline des::Generator from_words(const des::Alphabet& a, const Lang& marked) {
  des::GeneratorBuilder b(a);
  std::map<des::Word, int> node;
  node[{}] = b.add_state(false);
  b.set_initial(0);
  Lang closed = closure_of(marked);
  for (const des::Word& w : closed) {
    if (w.empty()) continue;
    des::Word parent(w.begin(), w.end() - 1);
    int s = b.add_state(false);
    node[w] = s;
    b.add_transition(node.at(parent), w.back().name, s);
  }
  for (const des::Word& w : marked) b.set_marked(node.at(w), true);
  return des::trim(b.build());
}

inline des::Generator closed_from_words(const des::Alphabet& a,
                                        const Lang& marked) {
  return des::prefix_closure(from_words(a, marked));
}

inline Lang marked_words(const des::Generator& g, int max_len) {
  Lang out;
  for (const auto& [w, marked] : des::enumerate_bounded(g, max_len))
    if (marked) out.insert(w);
  return out;
}

inline Lang generated_words(const des::Generator& g, int max_len) {
  Lang out;
  for (const auto& [w, marked] : des::enumerate_bounded(g, max_len))
    out.insert(w);
  return out;
}

inline bool is_acyclic(const des::Generator& g) {
  // Colors: 0 unvisited, 1 on stack, 2 done.
  std::vector<int> color(static_cast<std::size_t>(g.state_count()), 0);
  std::function<bool(int)> visit = [&](int s) {
    color[static_cast<std::size_t>(s)] = 1;
    for (const auto& [e, t] : g.out(s)) {
      if (color[static_cast<std::size_t>(t)] == 1) return false;
      if (color[static_cast<std::size_t>(t)] == 0 && !visit(t)) return false;
    }
    color[static_cast<std::size_t>(s)] = 2;
    return true;
  };
  for (int s = 0; s < g.state_count(); ++s)
    if (color[static_cast<std::size_t>(s)] == 0 && !visit(s)) return false;
  return true;
}

// Exact languages of an acyclic generator: no word can be longer than the
// state count, so a bounded enumeration is complete.
inline Lang exact_marked(const des::Generator& g) {
  return marked_words(g, g.state_count());
}

inline Lang exact_generated(const des::Generator& g) {
  return generated_words(g, g.state_count());
}

// ---------------------------------------------------- word-level ops ----

inline des::Word project_word(const des::Word& w, const Names& keep) {
  des::Word out;
  for (const des::EventId& e : w)
    if (keep.count(e.name)) out.push_back(e);
  return out;
}

inline Lang project_lang(const Lang& l, const Names& keep) {
  Lang out;
  for (const des::Word& w : l) out.insert(project_word(w, keep));
  return out;
}

// Calls fn for every word over `events` of length <= max_len.
inline void each_word(const std::vector<std::string>& events, int max_len,
                      const std::function<void(const des::Word&)>& fn) {
  des::Word w;
  std::function<void()> rec = [&] {
    fn(w);
    if (static_cast<int>(w.size()) == max_len) return;
    for (const std::string& e : events) {
      w.push_back(des::EventId(e));
      rec();
      w.pop_back();
    }
  };
  rec();
}

inline int max_len_of(const Lang& l) {
  std::size_t n = 0;
  for (const des::Word& w : l) n = std::max(n, w.size());
  return static_cast<int>(n);
}

// Synchronous product at word level: the words over a1 ∪ a2 whose
// projections land in l1 and l2. Complete because every event of a
// composite word survives in at least one projection, bounding its length
// by the two maxima.
inline Lang sync_lang(const Lang& l1, const Names& a1, const Lang& l2,
                      const Names& a2) {
  Names total_set = a1;
  total_set.insert(a2.begin(), a2.end());
  std::vector<std::string> total(total_set.begin(), total_set.end());
  int bound = max_len_of(l1) + max_len_of(l2);
  Lang out;
  each_word(total, bound, [&](const des::Word& w) {
    if (l1.count(project_word(w, a1)) && l2.count(project_word(w, a2)))
      out.insert(w);
  });
  return out;
}

// ---------------------------------------------------- alphabet helpers --

inline Names names_of(const des::Alphabet& a) {
  Names out;
  for (const des::Event& e : a.events()) out.insert(e.name);
  return out;
}

inline Names uncontrollable_of(const des::Alphabet& a) {
  Names out;
  for (const des::Event& e : a.events())
    if (!e.controllable) out.insert(e.name);
  return out;
}

inline Names controllable_of(const des::Alphabet& a) {
  Names out;
  for (const des::Event& e : a.events())
    if (e.controllable) out.insert(e.name);
  return out;
}

inline Names observable_of(const des::Alphabet& a) {
  Names out;
  for (const des::Event& e : a.events())
    if (e.observable) out.insert(e.name);
  return out;
}

// ---------------------------------------------------- property oracles --

inline bool o_controllable(const Lang& kbar, const Lang& lbar,
                           const Names& unctrl) {
  for (const des::Word& s : kbar)
    for (const std::string& u : unctrl) {
      des::Word su = append(s, u);
      if (lbar.count(su) && !kbar.count(su)) return false;
    }
  return true;
}

inline bool o_observable(const Lang& kbar, const Lang& lbar, const Names& ctrl,
                         const Names& obs) {
  for (const des::Word& s : kbar)
    for (const des::Word& s2 : kbar) {
      if (project_word(s, obs) != project_word(s2, obs)) continue;
      for (const std::string& e : ctrl) {
        if (kbar.count(append(s, e)) && lbar.count(append(s2, e)) &&
            !kbar.count(append(s2, e)))
          return false;
      }
    }
  return true;
}

inline bool o_rel_observable(const Lang& kbar, const Lang& cbar,
                             const Lang& lbar, const Names& all_events,
                             const Names& obs) {
  for (const des::Word& s : kbar)
    for (const des::Word& s2 : cbar) {
      if (project_word(s, obs) != project_word(s2, obs)) continue;
      for (const std::string& e : all_events) {
        if (kbar.count(append(s, e)) && lbar.count(append(s2, e)) &&
            !kbar.count(append(s2, e)))
          return false;
      }
    }
  return true;
}

inline bool o_normal(const Lang& kbar, const Lang& lbar, const Names& obs) {
  Lang images = project_lang(kbar, obs);
  Lang widened;
  for (const des::Word& w : lbar)
    if (images.count(project_word(w, obs))) widened.insert(w);
  return widened == kbar;
}

inline bool o_lm_closed(const Lang& k, const Lang& lm) {
  Lang meet;
  for (const des::Word& w : closure_of(k))
    if (lm.count(w)) meet.insert(w);
  return meet == k;
}

inline bool o_observer(const Lang& marked, const Names& keep) {
  Lang images = project_lang(marked, keep);
  for (const des::Word& s : closure_of(marked)) {
    des::Word ps = project_word(s, keep);
    for (const des::Word& t : images) {
      if (!is_prefix(ps, t)) continue;
      bool completed = false;
      for (const des::Word& w : marked)
        if (is_prefix(s, w) && project_word(w, keep) == t) {
          completed = true;
          break;
        }
      if (!completed) return false;
    }
  }
  return true;
}

inline bool o_occ(const Lang& closed, const Names& keep, const Names& unctrl) {
  for (const des::Word& w : closed) {
    bool hidden_controllable_seen = false;
    for (const des::EventId& e : w) {
      if (keep.count(e.name)) {
        if (unctrl.count(e.name) && hidden_controllable_seen) return false;
        hidden_controllable_seen = false;
      } else if (!unctrl.count(e.name)) {
        hidden_controllable_seen = true;
      }
    }
  }
  return true;
}

inline bool o_lcc(const Lang& closed, const Names& keep, const Names& unctrl) {
  // For every word s and kept uncontrollable event e: if e is reachable
  // from s through hidden events, it must be reachable through hidden
  // uncontrollable ones.
  std::map<std::pair<des::Word, std::string>, std::pair<bool, bool>> seen;
  for (const des::Word& w : closed) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::string& e = w[i].name;
      if (!keep.count(e) || !unctrl.count(e)) continue;
      bool connector_uncontrollable = true;
      for (std::size_t j = i; j-- > 0;) {
        // Words w[0..j) s with connector w[j..i); the connector must stay
        // hidden, so stop at the nearest kept event.
        if (!unctrl.count(w[j].name)) connector_uncontrollable = false;
        if (keep.count(w[j].name)) break;
        auto& flags = seen[{des::Word(w.begin(), w.begin() + static_cast<long>(j)), e}];
        flags.first = true;
        flags.second = flags.second || connector_uncontrollable;
      }
      // Empty connector: trivially uncontrollable.
      auto& flags = seen[{des::Word(w.begin(), w.begin() + static_cast<long>(i)), e}];
      flags.first = true;
      flags.second = true;
    }
  }
  for (const auto& [key, flags] : seen)
    if (flags.first && !flags.second) return false;
  return true;
}

// ---------------------------------------------------- synthesis oracles --

// All subsets of a finite language (use only for small languages).
inline std::vector<Lang> sublanguages(const Lang& k) {
  std::vector<des::Word> words(k.begin(), k.end());
  std::vector<Lang> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << words.size());
       ++mask) {
    Lang sub;
    for (std::size_t i = 0; i < words.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) sub.insert(words[i]);
    out.push_back(std::move(sub));
  }
  return out;
}

inline bool is_prefix_closed(const Lang& l) {
  return l == closure_of(l);
}

// Supremal controllable sublanguage by exhaustive union: controllability
// is preserved under union, so the union of all controllable subsets is
// the supremum.
inline Lang o_supc(const Lang& k, const Lang& lbar, const Names& unctrl) {
  Lang best;
  for (const Lang& sub : sublanguages(k))
    if (o_controllable(closure_of(sub), lbar, unctrl))
      best.insert(sub.begin(), sub.end());
  return best;
}

// Supremal normal prefix-closed sublanguage of a prefix-closed language.
inline Lang o_supn(const Lang& nbar, const Lang& lbar, const Names& obs) {
  Lang best;
  for (const Lang& sub : sublanguages(nbar))
    if (is_prefix_closed(sub) && o_normal(sub, lbar, obs))
      best.insert(sub.begin(), sub.end());
  return best;
}

inline Lang o_supcn(const Lang& k, const Lang& lbar, const Names& unctrl,
                    const Names& obs) {
  Lang best;
  for (const Lang& sub : sublanguages(k)) {
    Lang cl = closure_of(sub);
    if (o_controllable(cl, lbar, unctrl) && o_normal(cl, lbar, obs))
      best.insert(sub.begin(), sub.end());
  }
  return best;
}

inline bool o_conditionally_decomposable(const Lang& k, const Names& a1,
                                         const Names& a2, const Names& ak) {
  Names a1k = a1;
  a1k.insert(ak.begin(), ak.end());
  Names a2k = a2;
  a2k.insert(ak.begin(), ak.end());
  return sync_lang(project_lang(k, a1k), a1k, project_lang(k, a2k), a2k) == k;
}

// ---------------------------------------------------- random instances --

inline std::vector<std::string> event_pool() {
  return {"a", "b", "c", "d", "e", "f"};
}

inline des::Alphabet random_alphabet(std::mt19937& rng, int max_events,
                                     double unctrl_prob, double unobs_prob) {
  std::uniform_int_distribution<int> count(1, max_events);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  int n = count(rng);
  std::vector<des::Event> events;
  std::vector<std::string> pool = event_pool();
  for (int i = 0; i < n && i < static_cast<int>(pool.size()); ++i)
    events.push_back({pool[static_cast<std::size_t>(i)],
                      coin(rng) >= unctrl_prob, coin(rng) >= unobs_prob});
  return des::Alphabet(std::move(events));
}

// Random alphabet whose events shared with `base` keep base's attribute
// flags, so compositions across the two alphabets are well-formed.
inline des::Alphabet random_alphabet_consistent(std::mt19937& rng,
                                                const des::Alphabet& base,
                                                int max_events,
                                                double unctrl_prob,
                                                double unobs_prob) {
  des::Alphabet fresh =
      random_alphabet(rng, max_events, unctrl_prob, unobs_prob);
  std::vector<des::Event> events;
  for (const des::Event& e : fresh.events()) {
    int i = base.index_of(e.name);
    events.push_back(i >= 0 ? base.at(i) : e);
  }
  return des::Alphabet(std::move(events));
}

// Nonempty random subset of an alphabet, flags preserved.
inline des::Alphabet pick_events(std::mt19937& rng, const des::Alphabet& base,
                                 double keep_prob) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<des::Event> events;
  for (const des::Event& e : base.events())
    if (coin(rng) < keep_prob) events.push_back(e);
  if (events.empty()) {
    std::uniform_int_distribution<int> pick(0, base.size() - 1);
    events.push_back(base.at(pick(rng)));
  }
  return des::Alphabet(std::move(events));
}

// Random acyclic generator: transitions only lead to higher-numbered
// states, so every language involved is finite.
inline des::Generator random_generator(std::mt19937& rng,
                                       const des::Alphabet& a, int max_states,
                                       double edge_prob, double marked_prob) {
  std::uniform_int_distribution<int> count(1, max_states);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  int n = count(rng);
  des::GeneratorBuilder b(a);
  for (int s = 0; s < n; ++s) b.add_state(coin(rng) < marked_prob);
  b.set_initial(0);
  for (int s = 0; s + 1 < n; ++s) {
    std::uniform_int_distribution<int> target(s + 1, n - 1);
    for (int e = 0; e < a.size(); ++e)
      if (coin(rng) < edge_prob) b.add_transition(s, e, target(rng));
  }
  return b.build();
}

// Random acyclic generator with a nonempty marked language.
inline des::Generator random_nonempty(std::mt19937& rng, const des::Alphabet& a,
                                      int max_states, double edge_prob,
                                      double marked_prob) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    des::Generator g = des::trim(
        random_generator(rng, a, max_states, edge_prob, marked_prob));
    if (!g.empty()) return g;
  }
  // Statistically unreachable; keep the fallback total.
  return from_words(a, {des::Word{}});
}

// ------------------------------------------------- two-plant fixture ----

// The worked coordination instance used across the test files: two plants
// that choose between a private action followed by a shared one and a
// shared action followed by a private one, plus a global specification that
// forbids one interleaving.
inline des::Generator fixture_plant1() {
  des::Alphabet a{{"a1", true, true},
                  {"c", true, true},
                  {"u", false, true},
                  {"u1", false, true}};
  des::GeneratorBuilder b(a);
  for (int i = 0; i < 4; ++i) b.add_state(true);
  b.set_initial(0);
  b.add_transition(0, "a1", 1);
  b.add_transition(0, "c", 2);
  b.add_transition(1, "u", 3);
  b.add_transition(2, "u1", 3);
  return b.build();
}

inline des::Generator fixture_plant2() {
  des::Alphabet a{{"a2", true, true},
                  {"c", true, true},
                  {"u", false, true},
                  {"u2", false, true}};
  des::GeneratorBuilder b(a);
  for (int i = 0; i < 4; ++i) b.add_state(true);
  b.set_initial(0);
  b.add_transition(0, "a2", 1);
  b.add_transition(0, "c", 2);
  b.add_transition(1, "u", 3);
  b.add_transition(2, "u2", 3);
  return b.build();
}

// Prefix-closed specification closure({a1 a2 u, a2 a1, c u1 u2, c u2 u1}).
inline des::Generator fixture_spec() {
  des::Alphabet a{{"a1", true, true}, {"a2", true, true}, {"c", true, true},
                  {"u", false, true}, {"u1", false, true}, {"u2", false, true}};
  des::GeneratorBuilder b(a);
  for (int i = 0; i < 10; ++i) b.add_state(true);
  b.set_initial(0);
  b.add_transition(0, "a1", 1);
  b.add_transition(0, "a2", 2);
  b.add_transition(0, "c", 3);
  b.add_transition(1, "a2", 4);
  b.add_transition(2, "a1", 5);
  b.add_transition(3, "u1", 6);
  b.add_transition(3, "u2", 7);
  b.add_transition(4, "u", 8);
  b.add_transition(6, "u2", 9);
  b.add_transition(7, "u1", 9);
  return b.build();
}

inline des::CoordinationProblem fixture_problem(
    std::vector<std::string> coordinator_events,
    des::Observation observation = des::Observation::full) {
  return {fixture_plant1(), fixture_plant2(), fixture_spec(),
          std::move(coordinator_events), observation};
}

}  // namespace testutil
