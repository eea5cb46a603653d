#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dynobs/automaton.hpp"
#include "dynobs/mean_payoff.hpp"
#include "dynobs/observer.hpp"
#include "dynobs/rational.hpp"
#include "dynobs/synthesis.hpp"

namespace dynobs {

/// Cost of keeping a watch-set active for one step.
using WeightFn = std::function<std::int64_t(EventSet)>;

/// Default weight: the number of watched events.
std::int64_t watch_size(EventSet x);

struct WeightedAutomaton {
  Automaton automaton;
  /// Non-negative weight per state.
  std::vector<std::int64_t> weight;
};

struct MeanCycle {
  Rational value;
  /// Path from the initial state into a cycle of maximum mean.
  Lasso witness;
};

/// Maximum mean state weight over cycles reachable from the initial state.
/// Throws PreconditionError when a reachable state has no successor.
MeanCycle karp_max_mean(const WeightedAutomaton& wa);

/// Average weight of the watch-sets in force after each prefix of `w`,
/// including the empty prefix.
Rational word_cost(const Observer& obs, std::span<const Label> w, const WeightFn& weight = watch_size);

/// Average over the run's n+1 positions of the weight of the watch-set in
/// force there. Every plant step counts, observed or not.
Rational run_cost(const Plant& plant, const Observer& obs, const Run& run, const WeightFn& weight = watch_size);

/// Plant × observer where ε and f steps leave the observer in place;
/// state (q, s) weighs weight(L(s)). The plant is ε-completed first.
WeightedAutomaton cost_product(const Plant& plant, const Observer& obs, const WeightFn& weight = watch_size);

/// Worst-case long-run average watch cost, ν* of cost_product.
Rational observer_cost(const Plant& plant, const Observer& obs, const WeightFn& weight = watch_size);
MeanCycle observer_cost_witness(const Plant& plant, const Observer& obs, const WeightFn& weight = watch_size);

/// Mean-payoff game in which the observer (Player 1, minimising) picks
/// allowed watch-sets and the plant (Player 2, maximising) picks steps.
/// Choice edges weigh weight(X), step edges 0. Unwatched steps go through
/// a completion vertex whose only move re-selects the same watch-set.
struct CostGame {
  struct Vertex {
    StateId plant_state = 0;
    /// Even mpo node for choice vertices, odd node otherwise.
    std::uint32_t node = 0;
    bool completion = false;
    StateId observer_state = 0;
  };
  WeightedGraphGame game;
  std::vector<Vertex> vertices;
};

/// When `restrict_to` is given, the observer's own state is tracked and
/// choices are limited to its watch-sets; throws PreconditionError if it
/// picks a watch-set the mpo does not allow.
CostGame build_cost_game(const Plant& plant, const MostPermissiveObserver& mpo,
                         const WeightFn& weight = watch_size, const Observer* restrict_to = nullptr);

struct OptimalObserver {
  /// Twice the game value at the source.
  Rational cost;
  Observer observer;
  /// observer_cost of `observer`; equals `cost` when `tight`.
  Rational observer_cost;
  bool tight = false;
  std::size_t game_vertices = 0;
  std::size_t iterations = 0;
};

/// Absent when no observer makes the plant k-diagnosable.
std::optional<OptimalObserver> optimal_cost_observer(const Plant& plant, unsigned k,
                                                     const WeightFn& weight = watch_size,
                                                     std::size_t cap = kDefaultStateCap);

/// The optimal observer when its cost is within `budget`.
std::optional<Observer> bounded_cost_observer(const Plant& plant, unsigned k, const Rational& budget,
                                              const WeightFn& weight = watch_size,
                                              std::size_t cap = kDefaultStateCap);

}  // namespace dynobs
