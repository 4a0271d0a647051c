#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "des/alphabet.hpp"
#include "des/errors.hpp"

namespace des {

// A deterministic generator: finite states, a partial transition map, one
// initial state and a set of marked states. A generator with zero states
// represents the empty language pair (generated and marked language both
// empty). Immutable after construction; operations return new values.
class Generator {
 public:
  struct Transition {
    int from;
    int event;  // index into the alphabet
    int to;
  };

  Generator() = default;

  // Empty language over the given alphabet.
  explicit Generator(Alphabet a) : alphabet_(std::move(a)) {}

  Generator(Alphabet a, int states, int initial, std::vector<bool> marked,
            const std::vector<Transition>& transitions)
      : alphabet_(std::move(a)),
        states_(states),
        initial_(initial),
        marked_(std::move(marked)),
        out_(static_cast<std::size_t>(states)) {
    if (states_ < 0) throw PreconditionViolated("negative state count");
    if (states_ == 0) {
      if (initial_ != -1)
        throw PreconditionViolated("zero-state generator cannot have an "
                                   "initial state");
      marked_.clear();
      return;
    }
    if (initial_ < 0 || initial_ >= states_)
      throw PreconditionViolated("initial state out of range");
    if (static_cast<int>(marked_.size()) != states_)
      throw PreconditionViolated("marked vector size mismatch");
    for (const Transition& t : transitions) {
      if (t.from < 0 || t.from >= states_ || t.to < 0 || t.to >= states_)
        throw PreconditionViolated("transition state out of range");
      if (t.event < 0 || t.event >= alphabet_.size())
        throw PreconditionViolated("transition event out of range");
      auto [it, inserted] = out_[static_cast<std::size_t>(t.from)].emplace(
          t.event, t.to);
      if (!inserted)
        throw PreconditionViolated(
            "nondeterministic: duplicate transition on event '" +
            alphabet_.at(t.event).name + "'");
    }
  }

  // Single marked state with a self-loop on every event: generates and
  // marks all words over the alphabet.
  static Generator universal(Alphabet a) {
    std::vector<Transition> loops;
    for (int e = 0; e < a.size(); ++e) loops.push_back({0, e, 0});
    return Generator(std::move(a), 1, 0, {true}, loops);
  }

  const Alphabet& alphabet() const { return alphabet_; }
  int state_count() const { return states_; }
  bool empty() const { return states_ == 0; }
  int initial() const { return initial_; }

  bool is_marked(int s) const { return marked_[static_cast<std::size_t>(s)]; }
  bool has_marked_state() const {
    for (bool m : marked_)
      if (m) return true;
    return false;
  }

  // Outgoing transitions of a state, keyed by event index (so iteration is
  // in event-name order).
  const std::map<int, int>& out(int s) const {
    return out_[static_cast<std::size_t>(s)];
  }

  std::optional<int> next(int s, int event) const {
    const auto& m = out_[static_cast<std::size_t>(s)];
    auto it = m.find(event);
    if (it == m.end()) return std::nullopt;
    return it->second;
  }

  // State reached from the initial state by the word, if any.
  std::optional<int> run(const Word& w) const {
    if (empty()) return std::nullopt;
    int s = initial_;
    for (const EventId& e : w) {
      int idx = alphabet_.index_of(e.name);
      if (idx < 0) return std::nullopt;
      auto n = next(s, idx);
      if (!n) return std::nullopt;
      s = *n;
    }
    return s;
  }

  bool generates(const Word& w) const { return run(w).has_value(); }
  bool marks(const Word& w) const {
    auto s = run(w);
    return s && is_marked(*s);
  }

 private:
  Alphabet alphabet_;
  int states_ = 0;
  int initial_ = -1;
  std::vector<bool> marked_;
  std::vector<std::map<int, int>> out_;
};

// Incremental construction helper for Generator.
class GeneratorBuilder {
 public:
  explicit GeneratorBuilder(Alphabet a) : alphabet_(std::move(a)) {}

  const Alphabet& alphabet() const { return alphabet_; }

  int add_state(bool marked = false) {
    marked_.push_back(marked);
    return static_cast<int>(marked_.size()) - 1;
  }

  void set_initial(int s) { initial_ = s; }
  void set_marked(int s, bool m = true) {
    marked_[static_cast<std::size_t>(s)] = m;
  }

  void add_transition(int from, int event, int to) {
    transitions_.push_back({from, event, to});
  }

  void add_transition(int from, std::string_view event, int to) {
    int e = alphabet_.index_of(event);
    if (e < 0)
      throw PreconditionViolated("unknown event '" + std::string(event) + "'");
    add_transition(from, e, to);
  }

  int state_count() const { return static_cast<int>(marked_.size()); }

  Generator build() const {
    if (marked_.empty()) return Generator(alphabet_);
    return Generator(alphabet_, state_count(), initial_, marked_,
                     transitions_);
  }

 private:
  Alphabet alphabet_;
  int initial_ = -1;
  std::vector<bool> marked_;
  std::vector<Generator::Transition> transitions_;
};

// All generated words of length <= max_len, in length-lexicographic order,
// each with its marking flag.
inline std::vector<std::pair<Word, bool>> enumerate_bounded(
    const Generator& g, int max_len) {
  std::vector<std::pair<Word, bool>> out;
  if (g.empty() || max_len < 0) return out;
  // Breadth-first over (state, word); parents expanded in order and events
  // iterated in name order yield length-lexicographic output.
  std::deque<std::pair<int, Word>> queue;
  queue.emplace_back(g.initial(), Word{});
  while (!queue.empty()) {
    auto [s, w] = std::move(queue.front());
    queue.pop_front();
    out.emplace_back(w, g.is_marked(s));
    if (static_cast<int>(w.size()) == max_len) continue;
    for (const auto& [e, t] : g.out(s)) {
      Word next = w;
      next.push_back(EventId(g.alphabet().at(e).name));
      queue.emplace_back(t, std::move(next));
    }
  }
  return out;
}

}  // namespace des
