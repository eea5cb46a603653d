#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynobs/game.hpp"
#include "dynobs/observer.hpp"

namespace dynobs {

/// Finite-memory description of every valid observer for (A, k).
/// Even nodes are choice points carrying the allowed watch-sets; odd nodes
/// (even, X) wait for an observation in X. Observation edges leave odd
/// nodes for every event of X. Events that no confusable run pair can
/// produce lead to an unconstrained node that allows every watch-set.
struct MostPermissiveObserver {
  struct Even {
    std::vector<EventSet> allowed;  // lex_less order
    /// odd[i] is the odd node for allowed[i].
    std::vector<std::uint32_t> odd;
  };
  struct Odd {
    std::uint32_t even = 0;
    EventSet watch;
    /// (event, target even node), ascending by event, one per event of watch.
    std::vector<std::pair<unsigned, std::uint32_t>> observe;
  };

  Alphabet alphabet;
  unsigned k = 0;
  std::vector<Even> evens;
  std::vector<Odd> odds;
  std::uint32_t initial = 0;

  /// Index of `x` in evens[node].allowed, if allowed there.
  std::optional<std::size_t> find_allowed(std::uint32_t node, EventSet x) const;

  friend bool operator==(const MostPermissiveObserver& a, const MostPermissiveObserver& b);
};

struct SynthesisStats {
  std::size_t arena_vertices = 0;
  std::size_t knowledge_states = 0;
  std::size_t winning_states = 0;
};

/// Absent when no observer makes the plant k-diagnosable.
std::optional<MostPermissiveObserver> most_permissive_observer(const Plant& plant, unsigned k,
                                                               std::size_t cap = kDefaultStateCap,
                                                               SynthesisStats* stats = nullptr);

struct MembershipResult {
  bool member = true;
  /// Shortest history whose final watch-set is not allowed.
  std::optional<AnnotatedHistory> violation;
};

/// Throws InputError when the alphabets differ.
MembershipResult mpo_membership(const MostPermissiveObserver& mpo, const Observer& obs);

/// Picks one of the allowed watch-sets at an even node.
using Selector = std::function<EventSet(std::uint32_t node, std::span<const EventSet> allowed)>;

EventSet select_lex_least(std::uint32_t node, std::span<const EventSet> allowed);
/// Fewest events; ties broken by lex_less.
EventSet select_smallest(std::uint32_t node, std::span<const EventSet> allowed);
/// Most events; ties broken by lex_less.
EventSet select_largest(std::uint32_t node, std::span<const EventSet> allowed);
/// Uniform choice, a deterministic function of (seed, node).
Selector select_random(std::uint64_t seed);

/// Looks up a built-in selector by name: lex, smallest, largest, random.
/// Throws InputError for other names.
Selector selector_by_name(const std::string& name, std::uint64_t seed = 0);

/// Observer whose states are the even nodes reachable under `selector`,
/// numbered in breadth-first order.
Observer extract_observer(const MostPermissiveObserver& mpo, const Selector& selector,
                          const std::string& name = "extracted");

/// Player 1 strategy induced by an observer: a history of arena edges maps
/// to the watch-set reached after the observable events it contains.
class TraceStrategy {
 public:
  TraceStrategy(const Observer& obs, const GameArena& arena) : obs_(obs), arena_(arena) {}

  /// `history` lists arena edge indices forming a path from the initial
  /// vertex and ending at a Player 1 vertex. Throws PreconditionError
  /// otherwise.
  EventSet operator()(std::span<const std::size_t> history) const;

 private:
  Observer obs_;
  const GameArena& arena_;
};

TraceStrategy observer_to_strategy(const Observer& obs, const GameArena& arena);

}  // namespace dynobs
