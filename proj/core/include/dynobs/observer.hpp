#pragma once

#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "dynobs/alphabet.hpp"
#include "dynobs/automaton.hpp"

namespace dynobs {

/// Unvalidated observer as read from a file. Event references are raw
/// alphabet indices so that out-of-range entries can be reported.
///
/// Only transitions on watched events need to be listed: an unlisted
/// (state, event) pair is a self-loop when the event is unwatched there.
struct ObserverDraft {
  struct Edge {
    StateId src = 0;
    unsigned event = 0;
    StateId dst = 0;
  };

  std::string name;
  Alphabet alphabet;
  std::vector<std::string> states;
  StateId initial = 0;
  std::vector<std::vector<unsigned>> watch;
  std::vector<Edge> edges;
};

enum class ViolationKind {
  kBadState,
  kEventOutsideAlphabet,
  kMissingTransition,
  kNondeterminism,
  kStutterBreach,
};

struct Violation {
  ViolationKind kind;
  StateId state = 0;
  unsigned event = 0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

/// Lists every violation of totality, determinism, stutter closure and
/// alphabet membership. An empty report means the draft is a valid observer.
ValidationReport validate_observer(const ObserverDraft& draft);

/// Deterministic labelled automaton choosing a watch-set per state. Events
/// outside the current watch-set leave the state unchanged.
class Observer {
 public:
  Observer() = default;
  /// Throws InputError carrying the first violation when the draft is invalid.
  explicit Observer(const ObserverDraft& draft);

  const std::string& name() const { return name_; }
  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return state_names_.size(); }
  const std::string& state_name(StateId s) const { return state_names_.at(s); }
  StateId initial() const { return initial_; }
  EventSet watch(StateId s) const { return watch_.at(s); }
  StateId step(StateId s, unsigned event) const { return table_[s * alphabet_.size() + event]; }
  /// δ(s0, w) for a word over the alphabet; ε/f entries are ignored.
  StateId state_after(std::span<const Label> word) const;

  /// Canonical draft: watched transitions listed, unwatched self-loops elided.
  ObserverDraft to_draft() const;

  friend bool operator==(const Observer&, const Observer&) = default;

 private:
  std::string name_;
  Alphabet alphabet_;
  std::vector<std::string> state_names_;
  StateId initial_ = 0;
  std::vector<EventSet> watch_;
  std::vector<StateId> table_;
};

/// Single-state observer that always watches `sub`.
Observer static_observer(const Alphabet& alphabet, EventSet sub);

/// Transducer semantics: emits each symbol watched when it arrives.
/// Throws InputError for symbols outside the observer's alphabet.
Word observe_word(const Observer& obs, std::span<const Label> word);

/// Observation of a plant run: observe_word(obs, project(trace(run), Σ)).
Word observe_run(const Plant& plant, const Observer& obs, const Run& run);

/// Watch-sets interleaved with the observed events: watches[i] is the set
/// chosen before events[i]; watches has one more entry than events.
struct AnnotatedHistory {
  std::vector<EventSet> watches;
  Word events;

  friend bool operator==(const AnnotatedHistory&, const AnnotatedHistory&) = default;
};

/// Annotated history of an observation. Throws PreconditionError when a
/// symbol of `observation` is not watched at the moment it arrives.
AnnotatedHistory annotated_history(const Observer& obs, std::span<const Label> observation);

std::string format_history(const AnnotatedHistory& h, const Alphabet& alphabet);

}  // namespace dynobs
