#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dynobs/rational.hpp"

namespace dynobs {

struct WeightedEdge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  std::int64_t weight = 0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// A cycle together with a path leading to it, both as edge indices.
struct CycleWitness {
  Rational mean;
  std::vector<std::size_t> stem;
  std::vector<std::size_t> cycle;
};

/// Maximum mean cycle reachable from `from` (Karp per strongly connected
/// component). Absent when no cycle is reachable.
std::optional<CycleWitness> max_mean_cycle(std::size_t num_vertices, std::span<const WeightedEdge> edges,
                                           std::uint32_t from);

/// For every vertex, the best (max or min) cycle mean reachable from it.
std::vector<std::optional<Rational>> reachable_cycle_means(std::size_t num_vertices,
                                                           std::span<const WeightedEdge> edges,
                                                           bool maximize);

/// Bipartite two-player graph with integer edge weights. The maximiser
/// optimises liminf of the mean edge weight, the minimiser limsup.
class WeightedGraphGame {
 public:
  WeightedGraphGame() = default;
  /// Throws InputError unless edges alternate between the two players, every
  /// vertex has an outgoing edge, and every vertex is reachable from the
  /// source, which must belong to Player 1.
  WeightedGraphGame(std::vector<bool> player1, std::vector<WeightedEdge> edges, std::uint32_t source,
                    bool p1_maximizes = true);

  std::size_t num_vertices() const { return player1_.size(); }
  bool player1(std::uint32_t v) const { return player1_[v]; }
  const std::vector<bool>& players() const { return player1_; }
  /// Sorted by (src, dst, weight).
  const std::vector<WeightedEdge>& edges() const { return edges_; }
  std::span<const WeightedEdge> out(std::uint32_t v) const;
  /// Edges of v occupy indices [first_edge(v), end_edge(v)).
  std::size_t first_edge(std::uint32_t v) const { return offsets_[v]; }
  std::size_t end_edge(std::uint32_t v) const { return offsets_[v + 1]; }
  std::uint32_t source() const { return source_; }
  bool p1_maximizes() const { return p1_maximizes_; }
  bool maximizer(std::uint32_t v) const { return player1_[v] == p1_maximizes_; }
  std::int64_t max_abs_weight() const;

  friend bool operator==(const WeightedGraphGame&, const WeightedGraphGame&) = default;

 private:
  std::vector<bool> player1_;
  std::vector<WeightedEdge> edges_;
  std::vector<std::size_t> offsets_;
  std::uint32_t source_ = 0;
  bool p1_maximizes_ = true;
};

/// One chosen edge index per vertex.
using PositionalStrategy = std::vector<std::size_t>;

struct ZpSolution {
  std::vector<Rational> values;
  /// Optimal positional choices for both players.
  PositionalStrategy strategy;
  std::size_t iterations = 0;
  /// Values were certified by the strategies rather than by rounding.
  bool certified = false;
};

/// Value iteration with periodic certification of the greedy strategies;
/// falls back to rounding after 4·|V|³·W rounds. `allowed`, when non-empty,
/// masks edges out (at least one edge per vertex must stay).
ZpSolution zp_solve(const WeightedGraphGame& game, const std::vector<bool>& allowed = {});

std::vector<Rational> zp_value(const WeightedGraphGame& game);
PositionalStrategy zp_optimal_strategies(const WeightedGraphGame& game);

/// Mean weight of the cycle reached from `from` when both players follow
/// `strategy`.
Rational strategy_pair_value(const WeightedGraphGame& game, const PositionalStrategy& strategy,
                             std::uint32_t from);

}  // namespace dynobs
