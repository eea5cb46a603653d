#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynobs/alphabet.hpp"

namespace dynobs {

using StateId = std::uint32_t;

struct Transition {
  StateId src = 0;
  Label label;
  StateId dst = 0;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct Step {
  Label label;
  StateId target = 0;

  friend bool operator==(const Step&, const Step&) = default;
};

/// A finite run: a start state followed by labelled steps.
struct Run {
  StateId start = 0;
  std::vector<Step> steps;

  std::size_t length() const { return steps.size(); }
  StateId end() const { return steps.empty() ? start : steps.back().target; }

  friend bool operator==(const Run&, const Run&) = default;
};

/// Finite certificate for an infinite run: stem followed by a cycle repeated
/// forever. An empty cycle denotes the finite run `stem`.
struct Lasso {
  Run stem;
  std::vector<Step> cycle;

  bool finite() const { return cycle.empty(); }
  /// Stem followed by `times` copies of the cycle.
  Run unroll(std::size_t times) const;

  friend bool operator==(const Lasso&, const Lasso&) = default;
};

/// Sequence of labels. Observation words hold observable labels only.
using Word = std::vector<Label>;

/// Finite automaton over Σ ∪ {ε, f} with a nondeterministic transition
/// relation. Immutable once built; transitions are kept sorted by
/// (src, label, dst) and duplicate-free.
class Automaton {
 public:
  Automaton() = default;
  /// Throws InputError if the initial state or a transition endpoint is not a
  /// declared state, a label is outside the alphabet, or state names repeat.
  Automaton(std::string name, Alphabet alphabet, std::vector<std::string> states, StateId initial,
            std::vector<Transition> transitions);

  const std::string& name() const { return name_; }
  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return state_names_.size(); }
  const std::string& state_name(StateId s) const { return state_names_.at(s); }
  const std::vector<std::string>& state_names() const { return state_names_; }
  std::optional<StateId> find_state(std::string_view name) const;
  StateId initial() const { return initial_; }

  const std::vector<Transition>& transitions() const { return transitions_; }
  /// Outgoing transitions of `s`, sorted by label then target.
  std::span<const Transition> out(StateId s) const;
  /// Index of `t` within transitions(), if present.
  std::optional<std::size_t> index_of(const Transition& t) const;
  bool has_transition(StateId src, Label label, StateId dst) const;

  bool has_fault() const;
  /// True iff every state has at least one outgoing transition.
  bool is_live() const;
  /// Checks that consecutive steps of `run` follow the transition relation.
  bool accepts_run(const Run& run) const;
  bool accepts_lasso(const Lasso& lasso) const;

  friend bool operator==(const Automaton& a, const Automaton& b) {
    return a.name_ == b.name_ && a.alphabet_ == b.alphabet_ && a.state_names_ == b.state_names_ &&
           a.initial_ == b.initial_ && a.transitions_ == b.transitions_;
  }

 private:
  std::string name_;
  Alphabet alphabet_;
  std::vector<std::string> state_names_;
  StateId initial_ = 0;
  std::vector<Transition> transitions_;
  std::vector<std::size_t> offsets_;
};

using Plant = Automaton;

/// Erases every symbol outside `sub`; ε and f are always dropped. Throws
/// InputError for an observable index outside `alphabet`.
Word project(std::span<const Label> word, EventSet sub, const Alphabet& alphabet);

/// Labels of `run` with ε removed and f kept.
Word trace_of_run(const Run& run);

/// Adds an ε self-loop to every state without outgoing transitions.
Automaton epsilon_complete(const Automaton& a);

/// True iff some step i (1-based) carries f and length − i ≥ k.
bool classify_k_faulty(const Run& run, unsigned k);
/// True iff the run contains a fault step.
bool is_faulty(const Run& run);

/// Synchronous product over the union alphabet: shared observable events
/// move jointly; private events, ε and f interleave. Only states reachable
/// from the joint initial state are kept.
Automaton sync_product(const Automaton& a1, const Automaton& a2);

/// Default bound on run enumeration.
inline constexpr std::size_t kDefaultRunEnumerationCap = 12;

/// Every run of length at most `max_len` from the initial state, in
/// canonical order. Throws PreconditionError when max_len exceeds `cap`.
std::vector<Run> enumerate_runs(const Automaton& a, std::size_t max_len,
                                std::size_t cap = kDefaultRunEnumerationCap);

}  // namespace dynobs
