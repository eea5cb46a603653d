#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynobs/automaton.hpp"

namespace dynobs {

/// Default cap on constructed arena vertices and knowledge states.
inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 20;

/// Configuration of the diagnosis game: a fault-tracking copy (left) with
/// post-fault counter j ∈ {-1..k}, and a fault-free copy (right).
struct Triple {
  StateId left = 0;
  int j = -1;
  StateId right = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class MoveKind : std::uint8_t { kChoice, kSilentLeft, kSilentRight, kJoint };

/// Safety game between the observer (Player 1, picks watch-sets) and the
/// plant (Player 2, moves both copies). Player 2 wins by reaching j = k.
class GameArena {
 public:
  struct Vertex {
    Triple triple;
    bool player1 = true;
    /// Watch-set in force; meaningful for Player 2 vertices only.
    EventSet choice;
  };
  struct Edge {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    MoveKind kind = MoveKind::kChoice;
    /// Chosen watch-set for choice edges, plant label otherwise.
    EventSet choice;
    Label label;
  };

  /// Builds the arena reachable from ((q0,-1),q0). The plant is ε-completed
  /// first. Throws ResourceError when more than `cap` vertices arise.
  GameArena(const Plant& plant, unsigned k, std::size_t cap = kDefaultStateCap);

  const Plant& plant() const { return plant_; }
  unsigned k() const { return k_; }
  std::uint32_t initial() const { return 0; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Edge> out(std::uint32_t v) const;
  bool bad(std::uint32_t v) const { return vertices_[v].triple.j == static_cast<int>(k_); }
  std::size_t num_player1() const { return num_p1_; }
  std::size_t num_player2() const { return vertices_.size() - num_p1_; }

  /// Silent successors of `t` while `x` is watched: (kind, label, triple).
  struct Move {
    MoveKind kind;
    Label label;
    Triple target;
  };
  std::vector<Move> silent_moves(const Triple& t, EventSet x) const;
  /// Images of `t` under a joint step on observable event `event`.
  std::vector<Triple> joint_moves(const Triple& t, unsigned event) const;

 private:
  int bump(int j) const;

  Plant plant_;
  unsigned k_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::size_t num_p1_ = 0;
};

GameArena build_game(const Plant& plant, unsigned k, std::size_t cap = kDefaultStateCap);

/// Subset construction over Player 1's observations. Each knowledge state
/// is the set of configurations consistent with the observations so far.
struct KnowledgeArena {
  struct Choice {
    EventSet watch;
    /// The silent closure under `watch` reaches j = k.
    bool losing = false;
    /// (event, successor knowledge) for each watched event that can occur.
    /// Left empty for losing choices.
    std::vector<std::pair<unsigned, std::uint32_t>> successors;
  };

  unsigned k = 0;
  Alphabet alphabet;
  std::vector<std::vector<Triple>> knowledge;
  /// choices[K][X.mask()] for every X ⊆ Σ.
  std::vector<std::vector<Choice>> choices;
  std::uint32_t initial = 0;
};

/// Throws ResourceError when the knowledge states or the watch-set family
/// exceed `cap`.
KnowledgeArena build_knowledge_game(const GameArena& arena, std::size_t cap = kDefaultStateCap);

struct SafetySolution {
  std::vector<bool> winning;
  /// Every non-losing watch-set whose successors are all winning, in
  /// lex_less order. Empty for losing knowledge states.
  std::vector<std::vector<EventSet>> allowed;
};

/// Greatest fixpoint of the safety objective.
SafetySolution solve_safety(const KnowledgeArena& kg);

}  // namespace dynobs
