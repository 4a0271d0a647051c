#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "des/alphabet.hpp"
#include "des/errors.hpp"
#include "des/generator.hpp"
#include "des/ops.hpp"
#include "des/properties.hpp"
#include "des/synthesis.hpp"

// Coordination control of two local plants: project a global specification
// onto per-module alphabets extended by a set of coordinator events,
// synthesize one supervisor per module against its plant composed with the
// coordinator, and combine the parts into a global closed loop.

namespace des {

// Whether supervisors see every event or only the events flagged
// observable.
enum class Observation { full, partial };

// A two-module coordination instance. The specification is over the union
// of the plant alphabets; the coordinator events must contain every event
// shared by the two plants.
struct CoordinationProblem {
  Generator g1;
  Generator g2;
  Generator spec;
  std::vector<std::string> coordinator_events;
  Observation observation = Observation::full;
};

namespace detail {

// Alphabets and projections shared by the coordination routines:
// total = Σ1 ∪ Σ2, side[i] = Σi ∪ Σk, coord = Σk.
struct CoordinationContext {
  Alphabet total;
  std::array<Alphabet, 2> side;
  Alphabet coord;
  std::array<ProjectionSpec, 2> to_side;  // from the total alphabet
};

inline CoordinationContext validate(const CoordinationProblem& prob) {
  CoordinationContext ctx;
  ctx.total = Alphabet::merged(prob.g1.alphabet(), prob.g2.alphabet());
  if (prob.spec.alphabet() != ctx.total)
    throw AlphabetConstraintViolated(
        "specification alphabet must equal the union of the plant alphabets");
  for (const std::string& name : prob.coordinator_events)
    if (!ctx.total.contains(name))
      throw AlphabetConstraintViolated("coordinator event '" + name +
                                       "' is not a plant event");
  std::set<std::string> coord(prob.coordinator_events.begin(),
                              prob.coordinator_events.end());
  for (const Event& e : prob.g1.alphabet().events())
    if (prob.g2.alphabet().contains(e.name) && !coord.count(e.name))
      throw AlphabetConstraintViolated("shared event '" + e.name +
                                       "' must be a coordinator event");
  ctx.coord =
      ProjectionSpec::onto(ctx.total, prob.coordinator_events).target_alphabet();
  const std::array<const Generator*, 2> plants{&prob.g1, &prob.g2};
  for (int i = 0; i < 2; ++i) {
    std::vector<std::string> names = plants[static_cast<std::size_t>(i)]
                                         ->alphabet()
                                         .names();
    names.insert(names.end(), prob.coordinator_events.begin(),
                 prob.coordinator_events.end());
    ctx.to_side[static_cast<std::size_t>(i)] =
        ProjectionSpec::onto(ctx.total, names);
    ctx.side[static_cast<std::size_t>(i)] =
        ctx.to_side[static_cast<std::size_t>(i)].target_alphabet();
  }
  return ctx;
}

// Per-module projected specifications and composed plants, validated
// against the supplied coordinator.
struct SideInstances {
  CoordinationContext ctx;
  std::array<Generator, 2> spec_side;   // projection of the spec onto side[i]
  std::array<Generator, 2> plant_side;  // G_i composed with the coordinator
};

inline SideInstances side_instances(const CoordinationProblem& prob,
                                    const Generator& coordinator) {
  SideInstances si{validate(prob), {}, {}};
  if (coordinator.alphabet() != si.ctx.coord)
    throw AlphabetConstraintViolated(
        "coordinator alphabet must consist of the coordinator events");
  const std::array<const Generator*, 2> plants{&prob.g1, &prob.g2};
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    si.spec_side[idx] = project(prob.spec, si.ctx.to_side[idx]);
    si.plant_side[idx] = sync_product(*plants[idx], coordinator);
  }
  return si;
}

// Composition of the projections of g onto Σ1 ∪ Σk and Σ2 ∪ Σk; always a
// superset of the language of g.
inline Generator decomposition_composite(
    const Generator& g, const Alphabet& a1, const Alphabet& a2,
    const std::vector<std::string>& coordinator_events) {
  Alphabet total = Alphabet::merged(a1, a2);
  std::vector<std::string> n1 = a1.names();
  n1.insert(n1.end(), coordinator_events.begin(), coordinator_events.end());
  std::vector<std::string> n2 = a2.names();
  n2.insert(n2.end(), coordinator_events.begin(), coordinator_events.end());
  return sync_product(project(g, ProjectionSpec::onto(total, n1)),
                      project(g, ProjectionSpec::onto(total, n2)));
}

}  // namespace detail

// Conditional decomposability of the marked language of g over the two
// component alphabets and the coordinator events: the language must equal
// the synchronous composition of its projections onto Σi ∪ Σk. Witness:
// words = {w} for a shortest word of the composition missing from the
// language.
inline PropertyVerdict is_conditionally_decomposable(
    const Generator& g, const Alphabet& a1, const Alphabet& a2,
    const std::vector<std::string>& coordinator_events) {
  Alphabet total = Alphabet::merged(a1, a2);
  if (g.alphabet() != total)
    throw AlphabetConstraintViolated(
        "language alphabet must equal the union of the component alphabets");
  std::set<std::string> coord(coordinator_events.begin(),
                              coordinator_events.end());
  for (const std::string& name : coordinator_events)
    if (!total.contains(name))
      throw AlphabetConstraintViolated("coordinator event '" + name +
                                       "' is not a component event");
  for (const Event& e : a1.events())
    if (a2.contains(e.name) && !coord.count(e.name))
      throw AlphabetConstraintViolated("shared event '" + e.name +
                                       "' must be a coordinator event");
  Generator composite =
      detail::decomposition_composite(g, a1, a2, coordinator_events);
  if (language_equal(composite, g).marked) return PropertyVerdict::yes();
  Witness w;
  w.words = {*first_difference(composite, g, View::marked)};
  w.detail =
      "word of the composed projections is missing from the language";
  return PropertyVerdict::no(std::move(w));
}

// Grows the coordinator event set until both the language of g and its
// prefix closure are conditionally decomposable. Greedy: each round adds
// the event whose addition minimizes the combined state count of the two
// trimmed projection composites, breaking ties by event name; the full
// alphabet always succeeds, so the loop terminates. Returns the extended
// event set sorted by name.
inline std::vector<std::string> extend_alphabet_for_cd(
    const Generator& g, const Alphabet& a1, const Alphabet& a2,
    const std::vector<std::string>& coordinator_events) {
  Generator closure = prefix_closure(g);
  Alphabet total = Alphabet::merged(a1, a2);
  std::set<std::string> cur(coordinator_events.begin(),
                            coordinator_events.end());
  auto as_vector = [&] {
    return std::vector<std::string>(cur.begin(), cur.end());
  };
  auto decomposable = [&](const std::vector<std::string>& k) {
    return is_conditionally_decomposable(g, a1, a2, k).holds &&
           is_conditionally_decomposable(closure, a1, a2, k).holds;
  };
  auto score = [&](const std::vector<std::string>& k) {
    return trim(detail::decomposition_composite(g, a1, a2, k)).state_count() +
           trim(detail::decomposition_composite(closure, a1, a2, k))
               .state_count();
  };
  while (!decomposable(as_vector())) {
    std::string best;
    int best_score = 0;
    for (const std::string& name : total.names()) {
      if (cur.count(name)) continue;
      std::vector<std::string> candidate = as_vector();
      candidate.push_back(name);
      int s = score(candidate);
      if (best.empty() || s < best_score) {
        best = name;
        best_score = s;
      }
    }
    if (best.empty())
      throw InternalError("decomposability not reached on the full alphabet");
    cur.insert(best);
  }
  return as_vector();
}

// Grows the coordinator event set until the projection onto it is an
// observer for the generated language of each plant. Greedy: each round
// adds the event that leaves the fewest plants failing the check, then the
// one minimizing the combined state count of the projected plants, then
// the first in name order; the full alphabet always succeeds. Returns the
// extended event set sorted by name.
inline std::vector<std::string> extend_alphabet_for_observer(
    const Generator& g1, const Generator& g2,
    const std::vector<std::string>& coordinator_events) {
  Alphabet total = Alphabet::merged(g1.alphabet(), g2.alphabet());
  std::set<std::string> cur(coordinator_events.begin(),
                            coordinator_events.end());
  for (const std::string& name : coordinator_events)
    if (!total.contains(name))
      throw AlphabetConstraintViolated("coordinator event '" + name +
                                       "' is not a plant event");
  for (const Event& e : g1.alphabet().events())
    if (g2.alphabet().contains(e.name) && !cur.count(e.name))
      throw AlphabetConstraintViolated("shared event '" + e.name +
                                       "' must be a coordinator event");
  const std::array<Generator, 2> lang{generated_view(g1), generated_view(g2)};
  auto as_vector = [&] {
    return std::vector<std::string>(cur.begin(), cur.end());
  };
  // (plants failing the observer check, combined projected state count)
  auto score = [&](const std::vector<std::string>& k) {
    std::pair<int, int> s{0, 0};
    for (const Generator& l : lang) {
      ProjectionSpec p = ProjectionSpec::onto(l.alphabet(), k);
      if (!is_observer(p, l).holds) ++s.first;
      s.second += project(l, p).state_count();
    }
    return s;
  };
  while (score(as_vector()).first > 0) {
    std::string best;
    std::pair<int, int> best_score{0, 0};
    for (const std::string& name : total.names()) {
      if (cur.count(name)) continue;
      std::vector<std::string> candidate = as_vector();
      candidate.push_back(name);
      std::pair<int, int> s = score(candidate);
      if (best.empty() || s < best_score) {
        best = name;
        best_score = s;
      }
    }
    if (best.empty())
      throw InternalError("observer property not reached on the full alphabet");
    cur.insert(best);
  }
  return as_vector();
}

// Coordinator for the two plants: the trim synchronous composition of
// their projections onto the coordinator events. The coordinator events
// must contain every shared event.
inline Generator build_coordinator(
    const Generator& g1, const Generator& g2,
    const std::vector<std::string>& coordinator_events) {
  Alphabet total = Alphabet::merged(g1.alphabet(), g2.alphabet());
  std::set<std::string> coord(coordinator_events.begin(),
                              coordinator_events.end());
  for (const std::string& name : coordinator_events)
    if (!total.contains(name))
      throw AlphabetConstraintViolated("coordinator event '" + name +
                                       "' is not a plant event");
  for (const Event& e : g1.alphabet().events())
    if (g2.alphabet().contains(e.name) && !coord.count(e.name))
      throw AlphabetConstraintViolated("shared event '" + e.name +
                                       "' must be a coordinator event");
  return trim(sync_product(
      project(g1, ProjectionSpec::onto(g1.alphabet(), coordinator_events)),
      project(g2, ProjectionSpec::onto(g2.alphabet(), coordinator_events))));
}

// Conditional controllability of the specification: each projection onto a
// module alphabet must be controllable with respect to that plant composed
// with the coordinator. Precondition: the specification language lies
// inside the marked language of the full composition.
inline PropertyVerdict is_conditionally_controllable(
    const CoordinationProblem& prob, const Generator& coordinator) {
  auto si = detail::side_instances(prob, coordinator);
  Generator full =
      sync_product(sync_product(prob.g1, prob.g2), coordinator);
  if (!language_subset(prob.spec, full).marked)
    throw PreconditionViolated(
        "specification language must lie inside the composed plant language");
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    PropertyVerdict v = is_controllable(si.spec_side[idx], si.plant_side[idx]);
    if (!v.holds) {
      v.witness->detail =
          "module " + std::to_string(i + 1) + ": " + v.witness->detail;
      return v;
    }
  }
  return PropertyVerdict::yes();
}

// Conditional observability of the specification: each projection onto a
// module alphabet must be observable with respect to that plant composed
// with the coordinator. Under full observation the property holds
// trivially.
inline PropertyVerdict is_conditionally_observable(
    const CoordinationProblem& prob, const Generator& coordinator) {
  auto si = detail::side_instances(prob, coordinator);
  if (prob.observation == Observation::full) return PropertyVerdict::yes();
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    PropertyVerdict v = is_observable(si.spec_side[idx], si.plant_side[idx]);
    if (!v.holds) {
      v.witness->detail =
          "module " + std::to_string(i + 1) + ": " + v.witness->detail;
      return v;
    }
  }
  return PropertyVerdict::yes();
}

// Conditional normality of the specification: each projection onto a
// module alphabet must be normal with respect to that plant composed with
// the coordinator and the projection onto its observable events (identity
// under full observation).
inline PropertyVerdict is_conditionally_normal(const CoordinationProblem& prob,
                                               const Generator& coordinator) {
  auto si = detail::side_instances(prob, coordinator);
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    ProjectionSpec p = prob.observation == Observation::partial
                           ? ProjectionSpec::onto_observable(si.ctx.side[idx])
                           : ProjectionSpec::identity(si.ctx.side[idx]);
    PropertyVerdict v = is_normal(si.spec_side[idx], si.plant_side[idx], p);
    if (!v.holds) {
      v.witness->detail =
          "module " + std::to_string(i + 1) + ": " + v.witness->detail;
      return v;
    }
  }
  return PropertyVerdict::yes();
}

// Conditional closedness of the specification: each projection onto a
// module alphabet must be closed with respect to the marked language of
// that plant composed with the coordinator.
inline PropertyVerdict is_conditionally_closed(const CoordinationProblem& prob,
                                               const Generator& coordinator) {
  auto si = detail::side_instances(prob, coordinator);
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    PropertyVerdict v = is_lm_closed(si.spec_side[idx], si.plant_side[idx]);
    if (!v.holds) {
      v.witness->detail =
          "module " + std::to_string(i + 1) + ": " + v.witness->detail;
      return v;
    }
  }
  return PropertyVerdict::yes();
}

// How the pipeline arrived at its final supervisor.
enum class PipelineOutcome {
  supremal_full_observation,     // local supervisors suffice, result supremal
  supremal_partial_observation,  // as above under partial observation
  posterior_supervisor,          // coordinator-level supervisor added on top
  nonconflicting_failed,         // composition blocks, no result returned
};

// Everything the coordination pipeline produces, in computation order.
// When `result` is present its marked language is the composition of the
// local supervisors (and the posterior supervisor when present).
struct SynthesisReport {
  Generator coordinator;
  std::array<Generator, 2> local_specs;
  std::array<Generator, 2> local_supervisors;
  PropertyVerdict nonconflicting;
  Generator pk_intersection;
  PropertyVerdict pk_condition;
  std::optional<Generator> posterior_supervisor;
  std::optional<Generator> result;
  bool supremal = false;
  PipelineOutcome outcome = PipelineOutcome::nonconflicting_failed;
};

// Full coordination pipeline:
//   1. require the specification and its closure to be conditionally
//      decomposable (throws NotConditionallyDecomposable otherwise);
//   2. build the coordinator and the per-module specifications and plants;
//   3. synthesize one supervisor per module (sup_c under full observation,
//      sup_cn under partial observation);
//   4. check the supervisors for nonconflictingness and check the
//      coordinator-level condition: the intersection of their projections
//      onto the coordinator events must be controllable (and normal, under
//      partial observation) with respect to the coordinator;
//   5. if the condition holds the composition of the local supervisors is
//      the supremal result; otherwise a posterior coordinator-level
//      supervisor for the intersection is synthesized and composed in.
inline SynthesisReport synthesize(const CoordinationProblem& prob) {
  detail::CoordinationContext ctx = detail::validate(prob);
  PropertyVerdict cd = is_conditionally_decomposable(
      prob.spec, prob.g1.alphabet(), prob.g2.alphabet(),
      prob.coordinator_events);
  if (!cd.holds)
    throw NotConditionallyDecomposable(
        "specification is not conditionally decomposable; missing word: " +
        to_string(cd.witness->words[0]));
  PropertyVerdict cdc = is_conditionally_decomposable(
      prefix_closure(prob.spec), prob.g1.alphabet(), prob.g2.alphabet(),
      prob.coordinator_events);
  if (!cdc.holds)
    throw NotConditionallyDecomposable(
        "closure of the specification is not conditionally decomposable; "
        "missing word: " +
        to_string(cdc.witness->words[0]));

  SynthesisReport report;
  report.coordinator =
      build_coordinator(prob.g1, prob.g2, prob.coordinator_events);
  auto si = detail::side_instances(prob, report.coordinator);
  report.local_specs = si.spec_side;
  bool partial = prob.observation == Observation::partial;
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    SynthesisInput in{si.spec_side[idx], si.plant_side[idx], std::nullopt};
    if (partial) {
      in.projection = ProjectionSpec::onto_observable(ctx.side[idx]);
      report.local_supervisors[idx] = sup_cn(in);
    } else {
      report.local_supervisors[idx] = sup_c(in);
    }
  }
  report.nonconflicting = is_sync_nonconflicting(report.local_supervisors[0],
                                                 report.local_supervisors[1]);

  std::array<Generator, 2> pk;
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    pk[idx] = project(report.local_supervisors[idx],
                      ProjectionSpec::onto(ctx.side[idx],
                                           prob.coordinator_events));
  }
  report.pk_intersection = trim(intersect(pk[0], pk[1]));
  PropertyVerdict condition =
      is_controllable(report.pk_intersection, report.coordinator);
  if (!condition.holds) {
    condition.witness->detail =
        "projected supervisor intersection is not controllable with respect "
        "to the coordinator: " +
        condition.witness->detail;
  } else if (partial) {
    PropertyVerdict normal =
        is_normal(report.pk_intersection, report.coordinator,
                  ProjectionSpec::onto_observable(ctx.coord));
    if (!normal.holds) {
      normal.witness->detail =
          "projected supervisor intersection is not normal with respect to "
          "the coordinator: " +
          normal.witness->detail;
      condition = std::move(normal);
    }
  }
  report.pk_condition = std::move(condition);

  if (!report.nonconflicting.holds) {
    report.outcome = PipelineOutcome::nonconflicting_failed;
    return report;
  }
  if (report.pk_condition.holds) {
    report.result = trim(sync_product(report.local_supervisors[0],
                                      report.local_supervisors[1]));
    report.supremal = true;
    report.outcome = partial ? PipelineOutcome::supremal_partial_observation
                             : PipelineOutcome::supremal_full_observation;
    return report;
  }

  // Coordinator-level supervisor for the intersection. The same language
  // computed module-wise must agree; a mismatch means the synthesis
  // invariants were broken.
  std::optional<ProjectionSpec> coord_proj;
  if (partial) coord_proj = ProjectionSpec::onto_observable(ctx.coord);
  auto coordinator_level = [&](const Generator& target) {
    SynthesisInput in{target, report.coordinator, coord_proj};
    return partial ? sup_cn(in) : sup_c(in);
  };
  Generator monolithic = coordinator_level(report.pk_intersection);
  Generator distributed =
      trim(intersect(coordinator_level(pk[0]), coordinator_level(pk[1])));
  if (!language_equal(monolithic, distributed).marked)
    throw InternalError(
        "module-wise coordinator synthesis disagrees with the monolithic "
        "computation");
  report.posterior_supervisor = std::move(monolithic);

  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    PropertyVerdict again = is_sync_nonconflicting(
        *report.posterior_supervisor, report.local_supervisors[idx]);
    if (!again.holds) {
      again.witness->detail =
          "composition with the coordinator-level supervisor blocks: " +
          again.witness->detail;
      report.nonconflicting = std::move(again);
      report.outcome = PipelineOutcome::nonconflicting_failed;
      return report;
    }
  }
  report.result = trim(sync_product(
      sync_product(report.local_supervisors[0], report.local_supervisors[1]),
      *report.posterior_supervisor));
  report.supremal = false;
  report.outcome = PipelineOutcome::posterior_supervisor;
  return report;
}

// Checks that the given local supervisors solve the coordination problem:
// each closed loop S_i ∥ G_i ∥ G_k must be nonblocking and the composition
// of the closed loops must mark exactly the specification language.
inline PropertyVerdict verify_existence_theorem(const CoordinationProblem& prob,
                                                const Generator& coordinator,
                                                const Generator& s1,
                                                const Generator& s2) {
  auto si = detail::side_instances(prob, coordinator);
  const std::array<const Generator*, 2> sup{&s1, &s2};
  std::array<Generator, 2> loops;
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    if (sup[idx]->alphabet() != si.ctx.side[idx])
      throw AlphabetMismatch("local supervisor " + std::to_string(i + 1) +
                             " must be over its module alphabet");
    loops[idx] = sync_product(*sup[idx], si.plant_side[idx]);
    if (!is_nonblocking(loops[idx])) {
      auto blocked = first_difference(generated_view(loops[idx]),
                                      prefix_closure(loops[idx]), View::marked);
      Witness w;
      w.words = {blocked ? *blocked : Word{}};
      w.detail = "module " + std::to_string(i + 1) + " closed loop blocks";
      return PropertyVerdict::no(std::move(w));
    }
  }
  Generator combined = sync_product(loops[0], loops[1]);
  if (language_equal(combined, prob.spec).marked) return PropertyVerdict::yes();
  Witness w;
  if (auto extra = first_difference(combined, prob.spec, View::marked)) {
    w.words = {*extra};
    w.detail = "composed closed loops mark a word outside the specification";
  } else {
    w.words = {*first_difference(prob.spec, combined, View::marked)};
    w.detail = "specification word is missing from the composed closed loops";
  }
  return PropertyVerdict::no(std::move(w));
}

// Structural conditions under which the coordination pipeline is known to
// compose without conflict, reported per module: observer and local
// control consistency of the projection onto the module alphabet for the
// composed plant language, and observer, output control consistency and
// local control consistency of the projection onto the coordinator events
// for the lifted local plant language.
struct SufficientConditionSide {
  PropertyVerdict observer_on_composition;
  PropertyVerdict lcc_on_composition;
  PropertyVerdict observer_on_lifted;
  PropertyVerdict occ_on_lifted;
  PropertyVerdict lcc_on_lifted;
};

struct SufficientConditionReport {
  std::array<SufficientConditionSide, 2> modules;
};

inline SufficientConditionReport sufficient_condition_report(
    const CoordinationProblem& prob, const Generator& coordinator) {
  auto si = detail::side_instances(prob, coordinator);
  Generator composed = sync_product(sync_product(prob.g1, prob.g2), coordinator);
  Generator composed_lang = generated_view(composed);
  SufficientConditionReport out;
  const std::array<const Generator*, 2> plants{&prob.g1, &prob.g2};
  for (int i = 0; i < 2; ++i) {
    auto idx = static_cast<std::size_t>(i);
    SufficientConditionSide& side = out.modules[idx];
    side.observer_on_composition =
        is_observer(si.ctx.to_side[idx], composed_lang);
    side.lcc_on_composition = is_lcc(si.ctx.to_side[idx], composed);
    Generator lifted = lift(generated_view(*plants[idx]), si.ctx.side[idx]);
    ProjectionSpec to_coord =
        ProjectionSpec::onto(si.ctx.side[idx], prob.coordinator_events);
    side.observer_on_lifted = is_observer(to_coord, lifted);
    side.occ_on_lifted = is_occ(to_coord, lifted);
    side.lcc_on_lifted = is_lcc(to_coord, lifted);
  }
  return out;
}

}  // namespace des
