#pragma once

#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "des/alphabet.hpp"
#include "des/errors.hpp"
#include "des/generator.hpp"
#include "des/ops.hpp"

// Supremal-sublanguage synthesis: the largest sublanguage of a
// specification that a supervisor can enforce on the plant, under full
// observation (sup_c), under partial observation via normality (sup_n for
// prefix-closed languages, sup_cn for marked languages).

namespace des {

// One synthesis instance. Specification and plant share an alphabet; the
// projection (usually onto the observable events) is what the
// normality-based routines quantify over and is ignored by sup_c.
struct SynthesisInput {
  Generator spec;
  Generator plant;
  std::optional<ProjectionSpec> projection;
};

namespace detail {

// Generator whose marked language is L_m(g) Sigma^*: every word some prefix
// of which g marks. Used to subtract a forbidden language together with all
// its continuations.
inline Generator with_marked_absorbed(const Generator& g) {
  Generator a = accessible(g);
  if (a.empty()) return a;
  if (a.is_marked(a.initial())) return Generator::universal(a.alphabet());
  // Keep the unmarked part of a; entering a marked state diverts to an
  // absorbing marked sink.
  int sink = a.state_count();
  std::vector<Generator::Transition> trans;
  for (int s = 0; s < a.state_count(); ++s)
    for (const auto& [e, t] : a.out(s))
      trans.push_back({s, e, a.is_marked(t) ? sink : t});
  for (int e = 0; e < a.alphabet().size(); ++e)
    trans.push_back({sink, e, sink});
  std::vector<bool> marked(static_cast<std::size_t>(a.state_count()) + 1,
                           false);
  marked[static_cast<std::size_t>(sink)] = true;
  return accessible(Generator(a.alphabet(), a.state_count() + 1, a.initial(),
                              std::move(marked), trans));
}

}  // namespace detail

// Supremal controllable sublanguage of L_m(spec) ∩ L_m(plant) with respect
// to L(plant) and the uncontrollable events. Computed on the product by
// alternately removing states with an uncontrollable plant transition the
// candidate cannot follow and states that no longer reach a marked state.
// The result is a trim generator; empty when no controllable sublanguage
// other than the empty one exists.
inline Generator sup_c(const SynthesisInput& in) {
  if (in.spec.alphabet() != in.plant.alphabet())
    throw AlphabetMismatch("synthesis requires equal alphabets");
  const Alphabet& alpha = in.spec.alphabet();
  if (in.spec.empty() || in.plant.empty()) return Generator(alpha);

  const Generator& spec = in.spec;
  const Generator& plant = in.plant;
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
  intern(spec.initial(), plant.initial());
  std::vector<Generator::Transition> trans;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    auto [qs, qp] = order[static_cast<std::size_t>(s)];
    for (const auto& [e, ts] : spec.out(qs)) {
      auto tp = plant.next(qp, e);
      if (tp) trans.push_back({s, e, intern(ts, *tp)});
    }
  }
  std::vector<bool> marked(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    marked[i] = spec.is_marked(order[i].first) &&
                plant.is_marked(order[i].second);
  Generator prod(alpha, static_cast<int>(order.size()), 0, std::move(marked),
                 trans);

  std::vector<bool> keep(order.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    // Drop states where the plant enables an uncontrollable event that the
    // candidate cannot retain.
    for (int s = 0; s < prod.state_count(); ++s) {
      if (!keep[static_cast<std::size_t>(s)]) continue;
      int qp = order[static_cast<std::size_t>(s)].second;
      for (const auto& [e, tp] : plant.out(qp)) {
        if (alpha.controllable(e)) continue;
        auto t = prod.next(s, e);
        if (!t || !keep[static_cast<std::size_t>(*t)]) {
          keep[static_cast<std::size_t>(s)] = false;
          changed = true;
          break;
        }
      }
    }
    // Drop states that no longer reach a marked state within the kept part.
    std::vector<std::vector<int>> rev(order.size());
    std::deque<int> bfs;
    std::vector<bool> alive(order.size(), false);
    for (int s = 0; s < prod.state_count(); ++s) {
      if (!keep[static_cast<std::size_t>(s)]) continue;
      for (const auto& [e, t] : prod.out(s))
        if (keep[static_cast<std::size_t>(t)])
          rev[static_cast<std::size_t>(t)].push_back(s);
      if (prod.is_marked(s)) {
        alive[static_cast<std::size_t>(s)] = true;
        bfs.push_back(s);
      }
    }
    while (!bfs.empty()) {
      int s = bfs.front();
      bfs.pop_front();
      for (int p : rev[static_cast<std::size_t>(s)]) {
        if (!alive[static_cast<std::size_t>(p)]) {
          alive[static_cast<std::size_t>(p)] = true;
          bfs.push_back(p);
        }
      }
    }
    for (int s = 0; s < prod.state_count(); ++s) {
      if (keep[static_cast<std::size_t>(s)] &&
          !alive[static_cast<std::size_t>(s)]) {
        keep[static_cast<std::size_t>(s)] = false;
        changed = true;
      }
    }
  }
  return detail::restricted(prod, keep);
}

// Supremal normal sublanguage of closure(L_m(spec)) ∩ L(plant) with respect
// to L(plant) and the projection: the largest prefix-closed sublanguage
// equal to the intersection of the inverse projection of its image with the
// plant language. Returned as a trim generator with every state marked.
inline Generator sup_n(const SynthesisInput& in) {
  if (!in.projection)
    throw MissingProjection("normality synthesis requires a projection");
  if (in.spec.alphabet() != in.plant.alphabet())
    throw AlphabetMismatch("synthesis requires equal alphabets");
  const ProjectionSpec& p = *in.projection;
  if (p.source() != in.spec.alphabet())
    throw AlphabetMismatch(
        "normality projection must be over the common alphabet");
  const Alphabet& alpha = in.spec.alphabet();
  Generator lgen = generated_view(in.plant);
  Generator n = trim(intersect(prefix_closure(in.spec), lgen));
  // Peel off every word whose projected image is shared with a plant word
  // outside the candidate, together with all continuations; repeat until
  // stable (one pass settles prefix-closed inputs, the loop guards the
  // invariant).
  int rounds = 0;
  while (!n.empty()) {
    if (++rounds > 1000)
      throw InternalError("normality synthesis did not converge");
    Generator outside = difference(lgen, n, View::marked);
    if (outside.empty()) break;
    Generator forbidden =
        detail::with_marked_absorbed(lift(project(outside, p), alpha));
    Generator next = prefix_closure(difference(n, forbidden, View::marked));
    if (language_equal(next, n).marked) break;
    n = std::move(next);
  }
  return n;
}

// Supremal sublanguage of L_m(spec) ∩ L_m(plant) that is controllable and
// whose closure is normal, by alternating sup_c and sup_n until the
// languages agree. Use a projection onto the observable events for
// partial-observation synthesis; with the identity projection the result
// coincides with sup_c.
inline Generator sup_cn(const SynthesisInput& in) {
  if (!in.projection)
    throw MissingProjection(
        "combined synthesis requires a projection (identity is allowed)");
  if (in.spec.alphabet() != in.plant.alphabet())
    throw AlphabetMismatch("synthesis requires equal alphabets");
  if (in.projection->source() != in.spec.alphabet())
    throw AlphabetMismatch(
        "normality projection must be over the common alphabet");
  const Alphabet& alpha = in.spec.alphabet();
  Generator m = trim(intersect(in.spec, in.plant));
  int rounds = 0;
  while (true) {
    if (++rounds > 1000)
      throw InternalError("combined synthesis did not converge");
    Generator c = sup_c({m, in.plant, std::nullopt});
    if (c.empty()) return c;
    Generator nbar = sup_n({c, in.plant, in.projection});
    if (nbar.empty()) return Generator(alpha);
    Generator next = trim(intersect(c, nbar));
    if (language_equal(next, m).marked) return next;
    m = std::move(next);
  }
}

}  // namespace des
