#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "des/alphabet.hpp"
#include "des/errors.hpp"
#include "des/generator.hpp"

// Language-level operations on generators. All results are accessible and
// use canonical state numbering (breadth-first discovery order from the
// initial state, events iterated in name order), so equal constructions
// yield identical values.

namespace des {

// Which language component of a generator an operation applies to.
enum class View { generated, marked };

struct LanguagePair {
  bool generated = false;
  bool marked = false;
};

namespace detail {

inline std::vector<bool> reachable_forward(const Generator& g) {
  std::vector<bool> seen(static_cast<std::size_t>(g.state_count()), false);
  if (g.empty()) return seen;
  std::deque<int> queue{g.initial()};
  seen[static_cast<std::size_t>(g.initial())] = true;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (const auto& [e, t] : g.out(s)) {
      if (!seen[static_cast<std::size_t>(t)]) {
        seen[static_cast<std::size_t>(t)] = true;
        queue.push_back(t);
      }
    }
  }
  return seen;
}

inline std::vector<bool> reaches_marked(const Generator& g) {
  std::size_t n = static_cast<std::size_t>(g.state_count());
  std::vector<std::vector<int>> rev(n);
  std::deque<int> queue;
  std::vector<bool> seen(n, false);
  for (int s = 0; s < g.state_count(); ++s) {
    for (const auto& [e, t] : g.out(s)) rev[static_cast<std::size_t>(t)].push_back(s);
    if (g.is_marked(s)) {
      seen[static_cast<std::size_t>(s)] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int p : rev[static_cast<std::size_t>(s)]) {
      if (!seen[static_cast<std::size_t>(p)]) {
        seen[static_cast<std::size_t>(p)] = true;
        queue.push_back(p);
      }
    }
  }
  return seen;
}

// Copy of g restricted to the states where keep[s] is true. Returns the
// empty generator when the initial state is dropped. States are renumbered
// in breadth-first order from the initial state.
inline Generator restricted(const Generator& g, const std::vector<bool>& keep) {
  if (g.empty() || !keep[static_cast<std::size_t>(g.initial())])
    return Generator(g.alphabet());
  std::vector<int> id(static_cast<std::size_t>(g.state_count()), -1);
  std::vector<int> order;
  std::deque<int> queue{g.initial()};
  id[static_cast<std::size_t>(g.initial())] = 0;
  order.push_back(g.initial());
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (const auto& [e, t] : g.out(s)) {
      if (!keep[static_cast<std::size_t>(t)]) continue;
      if (id[static_cast<std::size_t>(t)] < 0) {
        id[static_cast<std::size_t>(t)] = static_cast<int>(order.size());
        order.push_back(t);
        queue.push_back(t);
      }
    }
  }
  std::vector<bool> marked(order.size());
  std::vector<Generator::Transition> trans;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int s = order[i];
    marked[i] = g.is_marked(s);
    for (const auto& [e, t] : g.out(s)) {
      if (keep[static_cast<std::size_t>(t)] && id[static_cast<std::size_t>(t)] >= 0)
        trans.push_back({static_cast<int>(i), e, id[static_cast<std::size_t>(t)]});
    }
  }
  return Generator(g.alphabet(), static_cast<int>(order.size()), 0,
                   std::move(marked), trans);
}

}  // namespace detail

// Restriction to the states reachable from the initial state. Preserves
// both the generated and the marked language.
inline Generator accessible(const Generator& g) {
  return detail::restricted(g, std::vector<bool>(
      static_cast<std::size_t>(g.state_count()), true));
}

// Restriction to the states from which a marked state is reachable (the
// result is also renumbered from the initial state, so unreachable states
// drop out as well — they carry no language). Preserves the marked
// language; the generated language may shrink.
inline Generator coaccessible(const Generator& g) {
  return detail::restricted(g, detail::reaches_marked(g));
}

// Accessible and coaccessible part. Preserves the marked language.
inline Generator trim(const Generator& g) { return coaccessible(g); }

// Copy of g rooted at the given state, restricted to its reachable part.
inline Generator rerooted(const Generator& g, int new_initial) {
  if (new_initial < 0 || new_initial >= g.state_count())
    throw PreconditionViolated("reroot state out of range");
  std::vector<Generator::Transition> trans;
  std::vector<bool> marked(static_cast<std::size_t>(g.state_count()));
  for (int s = 0; s < g.state_count(); ++s) {
    marked[static_cast<std::size_t>(s)] = g.is_marked(s);
    for (const auto& [e, t] : g.out(s)) trans.push_back({s, e, t});
  }
  return accessible(Generator(g.alphabet(), g.state_count(), new_initial,
                              std::move(marked), trans));
}

inline bool is_trim(const Generator& g) {
  if (g.empty()) return true;
  auto fwd = detail::reachable_forward(g);
  auto bwd = detail::reaches_marked(g);
  for (int s = 0; s < g.state_count(); ++s)
    if (!fwd[static_cast<std::size_t>(s)] || !bwd[static_cast<std::size_t>(s)])
      return false;
  return true;
}

// True iff every generated word extends to a marked word, i.e. the closure
// of the marked language equals the generated language.
inline bool is_nonblocking(const Generator& g) {
  if (g.empty()) return true;
  auto bwd = detail::reaches_marked(g);
  auto fwd = detail::reachable_forward(g);
  for (int s = 0; s < g.state_count(); ++s)
    if (fwd[static_cast<std::size_t>(s)] && !bwd[static_cast<std::size_t>(s)])
      return false;
  return true;
}

// Trim generator with every remaining state marked: its marked language is
// the prefix closure of the marked language of g.
inline Generator prefix_closure(const Generator& g) {
  Generator t = trim(g);
  if (t.empty()) return t;
  std::vector<Generator::Transition> trans;
  for (int s = 0; s < t.state_count(); ++s)
    for (const auto& [e, to] : t.out(s)) trans.push_back({s, e, to});
  return Generator(t.alphabet(), t.state_count(), t.initial(),
                   std::vector<bool>(static_cast<std::size_t>(t.state_count()), true),
                   trans);
}

// Accessible generator with every state marked: its marked language is the
// generated language of g.
inline Generator generated_view(const Generator& g) {
  Generator a = accessible(g);
  if (a.empty()) return a;
  std::vector<Generator::Transition> trans;
  for (int s = 0; s < a.state_count(); ++s)
    for (const auto& [e, to] : a.out(s)) trans.push_back({s, e, to});
  return Generator(a.alphabet(), a.state_count(), a.initial(),
                   std::vector<bool>(static_cast<std::size_t>(a.state_count()), true),
                   trans);
}

// Synchronous product. Shared events move both components, private events
// move one. The result alphabet is the union with merged attributes;
// conflicting attributes raise AttributeConflict. Both the generated and
// the marked language of the result are the synchronous products of the
// operands' languages. The result is accessible (not necessarily trim).
inline Generator sync_product(const Generator& g1, const Generator& g2) {
  Alphabet alpha = Alphabet::merged(g1.alphabet(), g2.alphabet());
  if (g1.empty() || g2.empty()) return Generator(alpha);

  std::vector<int> in1(static_cast<std::size_t>(alpha.size()));
  std::vector<int> in2(static_cast<std::size_t>(alpha.size()));
  for (int e = 0; e < alpha.size(); ++e) {
    in1[static_cast<std::size_t>(e)] = g1.alphabet().index_of(alpha.at(e).name);
    in2[static_cast<std::size_t>(e)] = g2.alphabet().index_of(alpha.at(e).name);
  }

  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> order;
  std::deque<int> queue;
  auto intern = [&](int a, int b) {
    auto [it, inserted] = id.emplace(std::make_pair(a, b),
                                     static_cast<int>(order.size()));
    if (inserted) {
      order.emplace_back(a, b);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(g1.initial(), g2.initial());

  std::vector<Generator::Transition> trans;
  std::vector<bool> marked;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    auto [q1, q2] = order[static_cast<std::size_t>(s)];
    for (int e = 0; e < alpha.size(); ++e) {
      int e1 = in1[static_cast<std::size_t>(e)];
      int e2 = in2[static_cast<std::size_t>(e)];
      int t1 = q1, t2 = q2;
      if (e1 >= 0) {
        auto n = g1.next(q1, e1);
        if (!n) continue;
        t1 = *n;
      }
      if (e2 >= 0) {
        auto n = g2.next(q2, e2);
        if (!n) continue;
        t2 = *n;
      }
      trans.push_back({s, e, intern(t1, t2)});
    }
  }
  marked.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    marked[i] = g1.is_marked(order[i].first) && g2.is_marked(order[i].second);
  return Generator(std::move(alpha), static_cast<int>(order.size()), 0,
                   std::move(marked), trans);
}

namespace detail {

struct SubsetAutomaton {
  Generator gen;
  std::vector<std::vector<int>> subsets;  // member states per subset state
};

// Deterministic automaton for the projected languages, built by subset
// construction. Subset states are closed under unprojected moves; a subset
// is marked when it contains a marked state, so the marked language of the
// result is exactly the projection of the marked language of g.
inline SubsetAutomaton project_with_subsets(const Generator& g,
                                            const ProjectionSpec& p) {
  if (p.source() != g.alphabet())
    throw AlphabetMismatch("projection source must equal the generator alphabet");
  Alphabet target = p.target_alphabet();
  if (g.empty()) return {Generator(target), {}};

  std::vector<int> target_of(static_cast<std::size_t>(g.alphabet().size()), -1);
  for (int e = 0, t = 0; e < g.alphabet().size(); ++e)
    if (p.keeps(e)) target_of[static_cast<std::size_t>(e)] = t++;

  auto close = [&](std::vector<int> states) {
    std::set<int> seen(states.begin(), states.end());
    std::deque<int> queue(states.begin(), states.end());
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      for (const auto& [e, t] : g.out(s)) {
        if (p.keeps(e)) continue;
        if (seen.insert(t).second) queue.push_back(t);
      }
    }
    return std::vector<int>(seen.begin(), seen.end());
  };

  std::map<std::vector<int>, int> id;
  std::vector<std::vector<int>> order;
  std::deque<int> queue;
  auto intern = [&](std::vector<int> subset) {
    auto [it, inserted] = id.emplace(std::move(subset),
                                     static_cast<int>(order.size()));
    if (inserted) {
      order.push_back(it->first);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(close({g.initial()}));

  std::vector<Generator::Transition> trans;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    std::vector<int> subset = order[static_cast<std::size_t>(s)];
    for (int e = 0; e < g.alphabet().size(); ++e) {
      if (!p.keeps(e)) continue;
      std::set<int> step;
      for (int q : subset) {
        auto n = g.next(q, e);
        if (n) step.insert(*n);
      }
      if (step.empty()) continue;
      int t = intern(close(std::vector<int>(step.begin(), step.end())));
      trans.push_back({s, target_of[static_cast<std::size_t>(e)], t});
    }
  }

  std::vector<bool> marked(order.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int q : order[i])
      if (g.is_marked(q)) {
        marked[i] = true;
        break;
      }
  Generator gen(std::move(target), static_cast<int>(order.size()), 0,
                std::move(marked), trans);
  return {std::move(gen), std::move(order)};
}

}  // namespace detail

// Natural projection of both languages of g. The result alphabet is the
// projection target intersected with the source events, inheriting the
// source attributes. The result is deterministic and accessible.
inline Generator project(const Generator& g, const ProjectionSpec& p) {
  return detail::project_with_subsets(g, p).gen;
}

// Inverse-projection lift to a larger alphabet: self-loops for the foreign
// events at every state. The generated/marked languages of the result are
// the inverse projections of those of g.
inline Generator lift(const Generator& g, const Alphabet& bigger) {
  for (const Event& e : g.alphabet().events()) {
    int j = bigger.index_of(e.name);
    if (j < 0)
      throw PreconditionViolated("lift target lacks event '" + e.name + "'");
    if (bigger.at(j) != e)
      throw AttributeConflict("event '" + e.name +
                              "' has conflicting attributes in the lift target");
  }
  if (g.empty()) return Generator(bigger);
  std::vector<Generator::Transition> trans;
  std::vector<int> from_big(static_cast<std::size_t>(bigger.size()), -1);
  for (int e = 0; e < bigger.size(); ++e)
    from_big[static_cast<std::size_t>(e)] =
        g.alphabet().index_of(bigger.at(e).name);
  std::vector<bool> marked(static_cast<std::size_t>(g.state_count()));
  for (int s = 0; s < g.state_count(); ++s) {
    marked[static_cast<std::size_t>(s)] = g.is_marked(s);
    for (int e = 0; e < bigger.size(); ++e) {
      int ge = from_big[static_cast<std::size_t>(e)];
      if (ge < 0) {
        trans.push_back({s, e, s});
      } else if (auto n = g.next(s, ge)) {
        trans.push_back({s, e, *n});
      }
    }
  }
  return Generator(bigger, g.state_count(), g.initial(), std::move(marked),
                   trans);
}

// Inclusion of the generated and the marked language of g1 in those of g2.
// Requires equal alphabets.
inline LanguagePair language_subset(const Generator& g1, const Generator& g2) {
  if (g1.alphabet() != g2.alphabet())
    throw AlphabetMismatch("language comparison requires equal alphabets");
  LanguagePair ok{true, true};
  if (g1.empty()) return ok;
  // Walk g1 against the completed view of g2; a pair with a dead g2 side
  // witnesses a generated-language violation, a marked g1 state whose g2
  // side is dead or unmarked witnesses a marked-language violation.
  std::map<std::pair<int, int>, bool> seen;
  std::deque<std::pair<int, int>> queue;
  auto push = [&](int a, int b) {
    if (seen.emplace(std::make_pair(a, b), true).second)
      queue.emplace_back(a, b);
  };
  push(g1.initial(), g2.empty() ? -1 : g2.initial());
  while (!queue.empty()) {
    auto [q1, q2] = queue.front();
    queue.pop_front();
    if (q2 < 0) ok.generated = false;
    if (g1.is_marked(q1) && (q2 < 0 || !g2.is_marked(q2))) ok.marked = false;
    if (!ok.generated && !ok.marked) return ok;
    for (const auto& [e, t1] : g1.out(q1)) {
      int t2 = -1;
      if (q2 >= 0) {
        auto n = g2.next(q2, e);
        t2 = n ? *n : -1;
      }
      push(t1, t2);
    }
  }
  return ok;
}

// Equality of the generated and the marked languages.
inline LanguagePair language_equal(const Generator& g1, const Generator& g2) {
  LanguagePair a = language_subset(g1, g2);
  LanguagePair b = language_subset(g2, g1);
  return {a.generated && b.generated, a.marked && b.marked};
}

// Shortest word in the designated language of g1 that is missing from the
// designated language of g2 (breadth-first, events in name order, so the
// result is the length-lexicographic minimum). nullopt when included.
inline std::optional<Word> first_difference(const Generator& g1,
                                            const Generator& g2, View view) {
  if (g1.alphabet() != g2.alphabet())
    throw AlphabetMismatch("language comparison requires equal alphabets");
  if (g1.empty()) return std::nullopt;
  struct Node {
    int q1, q2, parent, event;
  };
  std::vector<Node> nodes;
  std::map<std::pair<int, int>, bool> seen;
  std::deque<int> queue;
  auto push = [&](int a, int b, int parent, int event) {
    if (!seen.emplace(std::make_pair(a, b), true).second) return;
    nodes.push_back({a, b, parent, event});
    queue.push_back(static_cast<int>(nodes.size()) - 1);
  };
  auto word_of = [&](int idx) {
    Word w;
    for (int i = idx; nodes[static_cast<std::size_t>(i)].parent >= 0;
         i = nodes[static_cast<std::size_t>(i)].parent)
      w.push_back(EventId(
          g1.alphabet().at(nodes[static_cast<std::size_t>(i)].event).name));
    std::reverse(w.begin(), w.end());
    return w;
  };
  push(g1.initial(), g2.empty() ? -1 : g2.initial(), -1, -1);
  while (!queue.empty()) {
    int idx = queue.front();
    queue.pop_front();
    int q1 = nodes[static_cast<std::size_t>(idx)].q1;
    int q2 = nodes[static_cast<std::size_t>(idx)].q2;
    bool in1 = view == View::generated || g1.is_marked(q1);
    bool in2 = q2 >= 0 && (view == View::generated || g2.is_marked(q2));
    if (in1 && !in2) return word_of(idx);
    for (const auto& [e, t1] : g1.out(q1)) {
      int t2 = -1;
      if (q2 >= 0) {
        auto n = g2.next(q2, e);
        t2 = n ? *n : -1;
      }
      push(t1, t2, idx, e);
    }
  }
  return std::nullopt;
}

// Shortest marked word of g (length-lexicographic minimum), if any.
inline std::optional<Word> shortest_marked(const Generator& g) {
  if (g.empty()) return std::nullopt;
  return first_difference(g, Generator(g.alphabet()), View::marked);
}

// Product on a shared alphabet: both languages are intersected
// simultaneously. Requires equal alphabets.
inline Generator intersect(const Generator& g1, const Generator& g2) {
  if (g1.alphabet() != g2.alphabet())
    throw AlphabetMismatch("intersect requires equal alphabets");
  return sync_product(g1, g2);
}

// Union of both languages, by completed product. Requires equal alphabets.
inline Generator unite(const Generator& g1, const Generator& g2) {
  if (g1.alphabet() != g2.alphabet())
    throw AlphabetMismatch("union requires equal alphabets");
  if (g1.empty()) return accessible(g2);
  if (g2.empty()) return accessible(g1);
  const Alphabet& alpha = g1.alphabet();

  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> order;
  std::deque<int> queue;
  auto intern = [&](int a, int b) {
    auto [it, inserted] = id.emplace(std::make_pair(a, b),
                                     static_cast<int>(order.size()));
    if (inserted) {
      order.emplace_back(a, b);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(g1.initial(), g2.initial());
  std::vector<Generator::Transition> trans;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    auto [q1, q2] = order[static_cast<std::size_t>(s)];
    for (int e = 0; e < alpha.size(); ++e) {
      int t1 = q1 >= 0 ? (g1.next(q1, e) ? *g1.next(q1, e) : -1) : -1;
      int t2 = q2 >= 0 ? (g2.next(q2, e) ? *g2.next(q2, e) : -1) : -1;
      if (t1 < 0 && t2 < 0) continue;
      trans.push_back({s, e, intern(t1, t2)});
    }
  }
  std::vector<bool> marked(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    marked[i] = (order[i].first >= 0 && g1.is_marked(order[i].first)) ||
                (order[i].second >= 0 && g2.is_marked(order[i].second));
  return Generator(alpha, static_cast<int>(order.size()), 0, std::move(marked),
                   trans);
}

// Difference of the designated language components: the marked language of
// the result is designated(g1) minus designated(g2). The result is trim.
// Requires equal alphabets.
inline Generator difference(const Generator& g1, const Generator& g2,
                            View view = View::marked) {
  if (g1.alphabet() != g2.alphabet())
    throw AlphabetMismatch("difference requires equal alphabets");
  if (g1.empty()) return Generator(g1.alphabet());
  const Alphabet& alpha = g1.alphabet();

  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> order;
  std::deque<int> queue;
  auto intern = [&](int a, int b) {
    auto [it, inserted] = id.emplace(std::make_pair(a, b),
                                     static_cast<int>(order.size()));
    if (inserted) {
      order.emplace_back(a, b);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(g1.initial(), g2.empty() ? -1 : g2.initial());
  std::vector<Generator::Transition> trans;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    auto [q1, q2] = order[static_cast<std::size_t>(s)];
    for (const auto& [e, t1] : g1.out(q1)) {
      int t2 = -1;
      if (q2 >= 0) {
        auto n = g2.next(q2, e);
        t2 = n ? *n : -1;
      }
      trans.push_back({s, e, intern(t1, t2)});
    }
  }
  std::vector<bool> marked(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto [q1, q2] = order[i];
    bool in1 = view == View::generated || g1.is_marked(q1);
    bool in2 = q2 >= 0 && (view == View::generated || g2.is_marked(q2));
    marked[i] = in1 && !in2;
  }
  return trim(Generator(alpha, static_cast<int>(order.size()), 0,
                        std::move(marked), trans));
}

}  // namespace des
