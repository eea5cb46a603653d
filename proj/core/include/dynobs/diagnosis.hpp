#pragma once

#include <cstddef>
#include <optional>

#include "dynobs/automaton.hpp"
#include "dynobs/observer.hpp"

namespace dynobs {

/// A faulty and a non-faulty behaviour producing the same observation.
/// When the faulty lasso has a cycle, pumping it makes the faulty run
/// k-faulty for every k.
struct Counterexample {
  Lasso faulty;
  Lasso non_faulty;
};

struct Verdict {
  unsigned k = 0;
  /// Diagnosable at delay k.
  bool diagnosable = false;
  /// Least delay at which the plant is diagnosable; absent when no delay works.
  std::optional<unsigned> min_k;
  /// Present exactly when not diagnosable at k. Runs refer to the
  /// ε-completed plant.
  std::optional<Counterexample> counterexample;
  /// Whether ε-completion had to add self-loops before the analysis.
  bool epsilon_completed = false;
  /// Reachable states of the counter-tracking twin product.
  std::size_t twin_states = 0;
};

/// (Σ', k)-diagnosability for the static watch-set `sub`.
/// Throws InputError when sub is not a subset of the plant alphabet.
Verdict check_static(const Plant& plant, EventSet sub, unsigned k);

/// (Obs, k)-diagnosability via the masked product A ⊗ Obs.
/// Throws InputError on alphabet mismatch.
Verdict check_dynamic(const Plant& plant, const Observer& obs, unsigned k);

std::optional<unsigned> min_k_static(const Plant& plant, EventSet sub);
std::optional<unsigned> min_k_dynamic(const Plant& plant, const Observer& obs);

}  // namespace dynobs
