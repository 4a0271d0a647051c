#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "des/errors.hpp"

namespace des {

// A single event symbol. Events compare by name only; the controllability
// and observability attributes live in the Alphabet.
struct EventId {
  std::string name;

  EventId() = default;
  EventId(std::string n) : name(std::move(n)) {}  // NOLINT: implicit by design
  EventId(const char* n) : name(n) {}             // NOLINT: implicit by design

  auto operator<=>(const EventId&) const = default;
};

// A word is a finite sequence of events.
using Word = std::vector<EventId>;

inline std::string to_string(const Word& w) {
  if (w.empty()) return "<eps>";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i].name;
  }
  return out;
}

namespace detail {
inline bool valid_symbol(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == ':' || c == '#' || std::isspace(static_cast<unsigned char>(c)))
      return false;
  }
  return true;
}
}  // namespace detail

// An event together with its attribute flags. Defaults: controllable and
// observable.
struct Event {
  std::string name;
  bool controllable = true;
  bool observable = true;

  friend bool operator==(const Event&, const Event&) = default;
};

// A finite set of events with controllability/observability attributes.
// Entries are kept sorted by name; indices into that order are the event
// handles used throughout the library. Immutable after construction.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<Event> events) {
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.name < b.name; });
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (!detail::valid_symbol(events[i].name))
        throw PreconditionViolated("invalid event name '" + events[i].name +
                                   "'");
      if (i && events[i].name == events[i - 1].name)
        throw PreconditionViolated("duplicate event '" + events[i].name + "'");
    }
    events_ = std::move(events);
  }

  Alphabet(std::initializer_list<Event> events)
      : Alphabet(std::vector<Event>(events)) {}

  int size() const { return static_cast<int>(events_.size()); }

  const Event& at(int i) const { return events_[static_cast<std::size_t>(i)]; }
  const std::vector<Event>& events() const { return events_; }

  // Index of the event with the given name, or -1 if absent.
  int index_of(std::string_view name) const {
    auto it = std::lower_bound(
        events_.begin(), events_.end(), name,
        [](const Event& e, std::string_view n) { return e.name < n; });
    if (it == events_.end() || it->name != name) return -1;
    return static_cast<int>(it - events_.begin());
  }

  bool contains(std::string_view name) const { return index_of(name) >= 0; }
  bool controllable(int i) const { return at(i).controllable; }
  bool observable(int i) const { return at(i).observable; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(events_.size());
    for (const Event& e : events_) out.push_back(e.name);
    return out;
  }

  // True when every event of this alphabet appears in `other` with the same
  // attributes.
  bool consistent_subset_of(const Alphabet& other) const {
    for (const Event& e : events_) {
      int j = other.index_of(e.name);
      if (j < 0 || other.at(j) != e) return false;
    }
    return true;
  }

  // Union of two alphabets. Shared events must agree on both attribute
  // flags; otherwise AttributeConflict is thrown.
  static Alphabet merged(const Alphabet& a, const Alphabet& b) {
    std::vector<Event> out = a.events_;
    for (const Event& e : b.events_) {
      int i = a.index_of(e.name);
      if (i < 0) {
        out.push_back(e);
      } else if (a.at(i) != e) {
        throw AttributeConflict("event '" + e.name +
                                "' has conflicting attributes");
      }
    }
    return Alphabet(std::move(out));
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<Event> events_;
};

// A natural projection: erases all events of `source` outside the target
// set. The projection's result alphabet is the intersection of the target
// set with the source events, inheriting the source attributes.
class ProjectionSpec {
 public:
  ProjectionSpec() = default;

  ProjectionSpec(Alphabet source, const std::vector<std::string>& target)
      : source_(std::move(source)),
        keep_(static_cast<std::size_t>(source_.size()), false) {
    std::set<std::string> seen;
    for (const std::string& name : target) {
      if (!seen.insert(name).second) continue;
      int i = source_.index_of(name);
      if (i < 0)
        throw PreconditionViolated("projection target event '" + name +
                                   "' is not in the source alphabet");
      keep_[static_cast<std::size_t>(i)] = true;
    }
  }

  // Projection that keeps every source event.
  static ProjectionSpec identity(const Alphabet& source) {
    return ProjectionSpec(source, source.names());
  }

  // Projection onto the observable events of the source alphabet.
  static ProjectionSpec onto_observable(const Alphabet& source) {
    std::vector<std::string> target;
    for (const Event& e : source.events())
      if (e.observable) target.push_back(e.name);
    return ProjectionSpec(source, target);
  }

  // Projection onto target ∩ source, for a target that may mention events
  // outside the source alphabet (the usual coordination convention).
  static ProjectionSpec onto(const Alphabet& source,
                             const std::vector<std::string>& target) {
    std::vector<std::string> kept;
    for (const std::string& name : target)
      if (source.contains(name)) kept.push_back(name);
    return ProjectionSpec(source, kept);
  }

  const Alphabet& source() const { return source_; }
  bool keeps(int event_index) const {
    return keep_[static_cast<std::size_t>(event_index)];
  }

  Alphabet target_alphabet() const {
    std::vector<Event> kept;
    for (int i = 0; i < source_.size(); ++i)
      if (keeps(i)) kept.push_back(source_.at(i));
    return Alphabet(std::move(kept));
  }

  std::vector<std::string> target_names() const {
    std::vector<std::string> out;
    for (int i = 0; i < source_.size(); ++i)
      if (keeps(i)) out.push_back(source_.at(i).name);
    return out;
  }

  // Word-level erasure.
  Word apply(const Word& w) const {
    Word out;
    for (const EventId& e : w) {
      int i = source_.index_of(e.name);
      if (i < 0)
        throw PreconditionViolated("word event '" + e.name +
                                   "' is not in the projection source");
      if (keeps(i)) out.push_back(e);
    }
    return out;
  }

 private:
  Alphabet source_;
  std::vector<bool> keep_;
};

}  // namespace des
