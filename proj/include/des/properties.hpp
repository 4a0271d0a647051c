#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "des/alphabet.hpp"
#include "des/errors.hpp"
#include "des/generator.hpp"
#include "des/ops.hpp"

// Decidable checks for the language properties used by the synthesis and
// coordination layers. Every check returns a PropertyVerdict; a failed
// check carries a Witness with the shortest offending word(s), found by
// breadth-first search, so results are deterministic and suitable for
// regression tests.

namespace des {

// Counterexample attached to a failed property check. `words` holds the
// offending word(s) in the order documented by each check; `event` is the
// extending event for checks that single one out.
struct Witness {
  std::vector<Word> words;
  std::optional<EventId> event;
  std::string detail;
};

struct PropertyVerdict {
  bool holds = false;
  std::optional<Witness> witness;

  static PropertyVerdict yes() { return {true, std::nullopt}; }
  static PropertyVerdict no(Witness w) { return {false, std::move(w)}; }
};

namespace detail {

// Breadth-first exploration of composite states with parent links, used to
// reconstruct shortest witness words. Each edge records an alphabet event
// and a mask naming which of the (up to two) tracked words the event
// extends.
template <typename Key>
class WitnessSearch {
 public:
  explicit WitnessSearch(const Alphabet& alphabet) : alphabet_(&alphabet) {}

  // Interns the key; enqueues and returns the index if new, -1 otherwise.
  int push(const Key& key, int parent, int event, unsigned mask) {
    auto [it, inserted] = index_.emplace(key, static_cast<int>(nodes_.size()));
    if (!inserted) return -1;
    nodes_.push_back(Node{key, parent, event, mask});
    queue_.push_back(it->second);
    return it->second;
  }

  bool done() const { return queue_.empty(); }

  int pop() {
    int i = queue_.front();
    queue_.pop_front();
    return i;
  }

  const Key& key(int i) const {
    return nodes_[static_cast<std::size_t>(i)].key;
  }

  // The tracked word (selected by a mask bit) along the path to node i.
  Word word(int i, unsigned which) const {
    Word w;
    for (int n = i; nodes_[static_cast<std::size_t>(n)].parent >= 0;
         n = nodes_[static_cast<std::size_t>(n)].parent) {
      const Node& node = nodes_[static_cast<std::size_t>(n)];
      if (node.mask & which) w.push_back(EventId(alphabet_->at(node.event).name));
    }
    std::reverse(w.begin(), w.end());
    return w;
  }

 private:
  struct Node {
    Key key;
    int parent;
    int event;
    unsigned mask;
  };

  const Alphabet* alphabet_;
  std::map<Key, int> index_;
  std::vector<Node> nodes_;
  std::deque<int> queue_;
};

}  // namespace detail

// Controllability of the marked language of k against the plant l: no word
// in the closure of L_m(k) may be extended by an uncontrollable event that
// the plant enables to a word outside the closure. Witness: words = {s}
// with s in the closure, event = the escaping uncontrollable event.
inline PropertyVerdict is_controllable(const Generator& k, const Generator& l) {
  if (k.alphabet() != l.alphabet())
    throw AlphabetMismatch("controllability check requires equal alphabets");
  const Alphabet& alpha = k.alphabet();
  Generator kc = prefix_closure(k);
  Generator plant = accessible(l);
  if (kc.empty() || plant.empty()) return PropertyVerdict::yes();
  detail::WitnessSearch<std::pair<int, int>> search(alpha);
  search.push({kc.initial(), plant.initial()}, -1, -1, 0);
  while (!search.done()) {
    int node = search.pop();
    auto [a, b] = search.key(node);
    for (const auto& [e, tb] : plant.out(b)) {
      auto ta = kc.next(a, e);
      if (!ta && !alpha.controllable(e)) {
        Witness w;
        w.words = {search.word(node, 1)};
        w.event = EventId(alpha.at(e).name);
        w.detail =
            "uncontrollable event enabled by the plant leaves the closure "
            "of the specification";
        return PropertyVerdict::no(std::move(w));
      }
      if (ta) search.push({*ta, tb}, node, e, 1);
    }
  }
  return PropertyVerdict::yes();
}

// Observability of the marked language of k with respect to the plant l
// and the projection onto the observable events: for words s, s' in the
// closure with equal projections and a controllable event e, s'e in the
// closure and se in the plant imply se in the closure. Witness:
// words = {s, s'} where se escapes the closure while s'e stays inside,
// event = e.
inline PropertyVerdict is_observable(const Generator& k, const Generator& l) {
  if (k.alphabet() != l.alphabet())
    throw AlphabetMismatch("observability check requires equal alphabets");
  const Alphabet& alpha = k.alphabet();
  Generator kc = prefix_closure(k);
  Generator plant = accessible(l);
  if (kc.empty() || plant.empty()) return PropertyVerdict::yes();
  // Triple (a, b, a2): state of s in the closure, state of s in the plant,
  // state of s' in the closure. Unobservable events advance either word
  // alone, observable events advance both.
  detail::WitnessSearch<std::tuple<int, int, int>> search(alpha);
  search.push({kc.initial(), plant.initial(), kc.initial()}, -1, -1, 0);
  while (!search.done()) {
    int node = search.pop();
    auto [a, b, a2] = search.key(node);
    for (int e = 0; e < alpha.size(); ++e) {
      auto ta = kc.next(a, e);
      auto tb = plant.next(b, e);
      auto ta2 = kc.next(a2, e);
      if (alpha.controllable(e) && !ta && tb && ta2) {
        Witness w;
        w.words = {search.word(node, 1), search.word(node, 2)};
        w.event = EventId(alpha.at(e).name);
        w.detail =
            "controllable event permitted after an observation-equivalent "
            "word escapes the closure of the specification";
        return PropertyVerdict::no(std::move(w));
      }
      if (alpha.observable(e)) {
        if (ta && tb && ta2) search.push({*ta, *tb, *ta2}, node, e, 3);
      } else {
        if (ta && tb) search.push({*ta, *tb, a2}, node, e, 1);
        if (ta2) search.push({a, b, *ta2}, node, e, 2);
      }
    }
  }
  return PropertyVerdict::yes();
}

// Relative observability of the marked language of k with respect to the
// ambient language of c and the plant l (closure(k) <= closure(c) <= L(l)
// is a precondition): for s in the closure of k and s' in the closure of c
// with equal projections and any event e, se in the closure of k and s'e
// in the plant imply s'e in the closure of k. Witness: words = {s', s}
// where s'e escapes the closure of k while se stays inside, event = e.
inline PropertyVerdict is_relatively_observable(const Generator& k,
                                                const Generator& c,
                                                const Generator& l) {
  if (k.alphabet() != c.alphabet() || k.alphabet() != l.alphabet())
    throw AlphabetMismatch(
        "relative observability check requires equal alphabets");
  const Alphabet& alpha = k.alphabet();
  Generator kc = prefix_closure(k);
  Generator cc = prefix_closure(c);
  Generator plant = accessible(l);
  if (!language_subset(kc, cc).marked)
    throw PreconditionViolated(
        "relative observability requires the closure of the language to lie "
        "inside the closure of the ambient language");
  if (!language_subset(cc, generated_view(l)).marked)
    throw PreconditionViolated(
        "relative observability requires the closure of the ambient language "
        "to lie inside the plant language");
  if (kc.empty()) return PropertyVerdict::yes();
  // Quadruple (a, c2, b2, a2): state of s in closure(k), state of s' in
  // closure(c), state of s' in the plant, state of s' in closure(k) with
  // -1 once s' has left it.
  detail::WitnessSearch<std::tuple<int, int, int, int>> search(alpha);
  search.push({kc.initial(), cc.initial(), plant.initial(), kc.initial()}, -1,
              -1, 0);
  while (!search.done()) {
    int node = search.pop();
    auto [a, c2, b2, a2] = search.key(node);
    for (int e = 0; e < alpha.size(); ++e) {
      auto ta = kc.next(a, e);
      auto tc2 = cc.next(c2, e);
      auto tb2 = plant.next(b2, e);
      std::optional<int> ta2 = a2 >= 0 ? kc.next(a2, e) : std::nullopt;
      if (ta && tb2 && !ta2) {
        Witness w;
        w.words = {search.word(node, 2), search.word(node, 1)};
        w.event = EventId(alpha.at(e).name);
        w.detail =
            "event permitted after an observation-equivalent word of the "
            "specification escapes its closure inside the plant";
        return PropertyVerdict::no(std::move(w));
      }
      int na2 = ta2 ? *ta2 : -1;
      if (alpha.observable(e)) {
        if (ta && tc2 && tb2) search.push({*ta, *tc2, *tb2, na2}, node, e, 3);
      } else {
        if (ta) search.push({*ta, c2, b2, a2}, node, e, 1);
        if (tc2 && tb2) search.push({a, *tc2, *tb2, na2}, node, e, 2);
      }
    }
  }
  return PropertyVerdict::yes();
}

// Normality of the closure of L_m(k) with respect to the plant l and the
// projection p: the closure equals the inverse projection of its image
// intersected with L(l). Witness: words = {w} with w in the symmetric
// difference of the two sides.
inline PropertyVerdict is_normal(const Generator& k, const Generator& l,
                                 const ProjectionSpec& p) {
  if (k.alphabet() != l.alphabet())
    throw AlphabetMismatch("normality check requires equal alphabets");
  if (p.source() != k.alphabet())
    throw AlphabetMismatch(
        "normality projection must be over the common alphabet");
  Generator kc = prefix_closure(k);
  Generator n = intersect(lift(project(kc, p), k.alphabet()),
                          generated_view(l));
  if (language_equal(kc, n).marked) return PropertyVerdict::yes();
  Witness w;
  if (auto diff = first_difference(n, kc, View::marked)) {
    w.words = {*diff};
    w.detail =
        "plant word with the projected image of a closure word lies outside "
        "the closure of the specification";
  } else {
    w.words = {*first_difference(kc, n, View::marked)};
    w.detail = "closure of the specification leaves the plant language";
  }
  return PropertyVerdict::no(std::move(w));
}

// L_m(g)-closedness of the marked language of k: L_m(k) must equal the
// intersection of its closure with L_m(g). Witness: words = {w} in the
// symmetric difference.
inline PropertyVerdict is_lm_closed(const Generator& k, const Generator& g) {
  if (k.alphabet() != g.alphabet())
    throw AlphabetMismatch("closedness check requires equal alphabets");
  Generator both = intersect(prefix_closure(k), g);
  if (language_equal(k, both).marked) return PropertyVerdict::yes();
  Witness w;
  if (auto diff = first_difference(both, k, View::marked)) {
    w.words = {*diff};
    w.detail =
        "word of the closure marked by the plant is missing from the "
        "specification";
  } else {
    w.words = {*first_difference(k, both, View::marked)};
    w.detail = "specification word is not marked by the plant";
  }
  return PropertyVerdict::no(std::move(w));
}

// Nonconflictingness of two languages under synchronous composition: the
// closure of the composition must equal the composition of the closures.
// Witness: words = {w} with w in the composition of the closures but with
// no extension into the composed language.
inline PropertyVerdict is_sync_nonconflicting(const Generator& k1,
                                              const Generator& k2) {
  Generator left = prefix_closure(sync_product(k1, k2));
  Generator right = sync_product(prefix_closure(k1), prefix_closure(k2));
  if (language_equal(left, right).marked) return PropertyVerdict::yes();
  Witness w;
  w.words = {*first_difference(right, left, View::marked)};
  w.detail =
      "word in the composition of the closures has no extension into the "
      "composed language";
  return PropertyVerdict::no(std::move(w));
}

// Observer property of the projection p for the marked language of the
// trim generator g: whenever the projected image of a word can be extended
// to the image of a marked word, some extension of the word itself
// projects onto that extension. Witness: words = {s, t} where s is a word
// of g and t extends P(s) in the image with no matching extension of s.
inline PropertyVerdict is_observer(const ProjectionSpec& p, const Generator& g) {
  if (p.source() != g.alphabet())
    throw AlphabetMismatch("observer projection must match the alphabet");
  if (!is_trim(g))
    throw PreconditionViolated("observer check requires a trim generator");
  if (g.empty()) return PropertyVerdict::yes();
  auto sub = detail::project_with_subsets(g, p);
  const Generator& image = sub.gen;
  std::vector<int> to_image(static_cast<std::size_t>(g.alphabet().size()), -1);
  for (int e = 0; e < g.alphabet().size(); ++e)
    if (p.keeps(e))
      to_image[static_cast<std::size_t>(e)] =
          image.alphabet().index_of(g.alphabet().at(e).name);
  // Walk pairs (state of s, image state of P(s)); the projected future of
  // the state must cover the future of the image state (the reverse
  // inclusion always holds).
  detail::WitnessSearch<std::pair<int, int>> search(g.alphabet());
  std::map<int, Generator> projected_future;
  search.push({g.initial(), image.initial()}, -1, -1, 0);
  while (!search.done()) {
    int node = search.pop();
    auto [q, x] = search.key(node);
    auto it = projected_future.find(q);
    if (it == projected_future.end())
      it = projected_future.emplace(q, project(rerooted(g, q), p)).first;
    Generator from_x = rerooted(image, x);
    if (!language_subset(from_x, it->second).marked) {
      Word s = search.word(node, 1);
      Word t = p.apply(s);
      Word ext = *first_difference(from_x, it->second, View::marked);
      t.insert(t.end(), ext.begin(), ext.end());
      Witness w;
      w.words = {std::move(s), std::move(t)};
      w.detail =
          "projected continuation to a marked image cannot be realized from "
          "the reached state";
      return PropertyVerdict::no(std::move(w));
    }
    for (const auto& [e, tq] : g.out(q)) {
      int x2 = x;
      if (to_image[static_cast<std::size_t>(e)] >= 0) {
        auto n = image.next(x, to_image[static_cast<std::size_t>(e)]);
        if (!n) throw InternalError("projection image lost a kept event");
        x2 = *n;
      }
      search.push({tq, x2}, node, e, 1);
    }
  }
  return PropertyVerdict::yes();
}

// Output control consistency of the projection p for the generated
// language of g: on any path, an uncontrollable kept event must not be
// preceded by a controllable hidden event since the previous kept event
// (or the start). Witness: words = {s e} the shortest violating word,
// event = the uncontrollable kept event e.
inline PropertyVerdict is_occ(const ProjectionSpec& p, const Generator& g) {
  if (p.source() != g.alphabet())
    throw AlphabetMismatch("consistency projection must match the alphabet");
  const Alphabet& alpha = g.alphabet();
  Generator l = accessible(g);
  if (l.empty()) return PropertyVerdict::yes();
  // Pair (state, flag): flag set iff a controllable hidden event occurred
  // since the last kept event.
  detail::WitnessSearch<std::pair<int, int>> search(alpha);
  search.push({l.initial(), 0}, -1, -1, 0);
  while (!search.done()) {
    int node = search.pop();
    auto [q, flag] = search.key(node);
    for (const auto& [e, t] : l.out(q)) {
      if (p.keeps(e)) {
        if (flag != 0 && !alpha.controllable(e)) {
          Word w = search.word(node, 1);
          w.push_back(EventId(alpha.at(e).name));
          Witness wit;
          wit.words = {std::move(w)};
          wit.event = EventId(alpha.at(e).name);
          wit.detail =
              "uncontrollable kept event follows a controllable hidden event";
          return PropertyVerdict::no(std::move(wit));
        }
        search.push({t, 0}, node, e, 1);
      } else {
        search.push({t, alpha.controllable(e) ? 1 : flag}, node, e, 1);
      }
    }
  }
  return PropertyVerdict::yes();
}

// Local control consistency of the projection p for the generated language
// of g: whenever an uncontrollable kept event can be reached from the
// current state through hidden events, it can also be reached through
// uncontrollable hidden events. Witness: words = {s} reaching the state,
// event = the uncontrollable kept event.
inline PropertyVerdict is_lcc(const ProjectionSpec& p, const Generator& g) {
  if (p.source() != g.alphabet())
    throw AlphabetMismatch("consistency projection must match the alphabet");
  const Alphabet& alpha = g.alphabet();
  Generator l = accessible(g);
  if (l.empty()) return PropertyVerdict::yes();
  int n = l.state_count();
  // Hidden-word reachability closures, with and without the restriction to
  // uncontrollable events.
  auto closure_of = [&](bool uncontrollable_only) {
    std::vector<std::vector<bool>> reach(
        static_cast<std::size_t>(n),
        std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int s = 0; s < n; ++s) {
      std::deque<int> queue{s};
      reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)] = true;
      while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (const auto& [e, t] : l.out(q)) {
          if (p.keeps(e)) continue;
          if (uncontrollable_only && alpha.controllable(e)) continue;
          if (!reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]) {
            reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
                true;
            queue.push_back(t);
          }
        }
      }
    }
    return reach;
  };
  std::vector<std::vector<bool>> reach_any = closure_of(false);
  std::vector<std::vector<bool>> reach_unc = closure_of(true);
  auto enabled_after = [&](const std::vector<std::vector<bool>>& reach, int q,
                           int e) {
    for (int r = 0; r < n; ++r)
      if (reach[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)] &&
          l.next(r, e))
        return true;
    return false;
  };
  detail::WitnessSearch<int> search(alpha);
  search.push(l.initial(), -1, -1, 0);
  while (!search.done()) {
    int node = search.pop();
    int q = search.key(node);
    for (int e = 0; e < alpha.size(); ++e) {
      if (!p.keeps(e) || alpha.controllable(e)) continue;
      if (enabled_after(reach_any, q, e) && !enabled_after(reach_unc, q, e)) {
        Witness w;
        w.words = {search.word(node, 1)};
        w.event = EventId(alpha.at(e).name);
        w.detail =
            "uncontrollable kept event is reachable through hidden events "
            "but not through uncontrollable ones";
        return PropertyVerdict::no(std::move(w));
      }
    }
    for (const auto& [e, t] : l.out(q)) search.push(t, node, e, 1);
  }
  return PropertyVerdict::yes();
}

}  // namespace des
