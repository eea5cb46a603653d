#include "dynobs/mean_payoff.hpp"

#include <algorithm>
#include <limits>

#include "dynobs/error.hpp"

namespace dynobs {
namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct Graph {
  std::size_t n;
  std::span<const WeightedEdge> edges;
  std::vector<std::vector<std::size_t>> out;  // edge indices

  Graph(std::size_t n_, std::span<const WeightedEdge> e) : n(n_), edges(e), out(n_) {
    for (std::size_t i = 0; i < e.size(); ++i) out[e[i].src].push_back(i);
  }
};

// Tarjan; components come out in reverse topological order.
std::vector<std::uint32_t> components(const Graph& g, std::uint32_t* count) {
  std::vector<std::uint32_t> comp(g.n, kNone), low(g.n, 0), num(g.n, kNone), stack;
  std::vector<bool> on(g.n, false);
  std::uint32_t counter = 0, ncomp = 0;
  for (std::uint32_t root = 0; root < g.n; ++root) {
    if (num[root] != kNone) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> call{{root, 0}};
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on[root] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < g.out[v].size()) {
        auto w = g.edges[g.out[v][i++]].dst;
        if (num[w] == kNone) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = true;
          call.emplace_back(w, 0);
        } else if (on[w]) {
          low[v] = std::min(low[v], num[w]);
        }
      } else {
        if (low[v] == num[v]) {
          std::uint32_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on[w] = false;
            comp[w] = ncomp;
          } while (w != v);
          ++ncomp;
        }
        auto done = v;
        call.pop_back();
        if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
    }
  }
  *count = ncomp;
  return comp;
}

// Karp's maximum cycle mean of the subgraph induced by `members`, which must
// be strongly connected and contain at least one internal edge.
Rational karp(const Graph& g, const std::vector<std::uint32_t>& members, const std::vector<std::uint32_t>& comp) {
  const std::size_t m = members.size();
  const std::uint32_t c = comp[members[0]];
  std::vector<std::uint32_t> local(g.n, kNone);
  for (std::size_t i = 0; i < m; ++i) local[members[i]] = static_cast<std::uint32_t>(i);
  constexpr std::int64_t kNeg = std::numeric_limits<std::int64_t>::min();
  std::vector<std::vector<std::int64_t>> d(m + 1, std::vector<std::int64_t>(m, kNeg));
  d[0][0] = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      if (d[k - 1][i] == kNeg) continue;
      for (auto ei : g.out[members[i]]) {
        const auto& e = g.edges[ei];
        if (comp[e.dst] != c) continue;
        auto& cell = d[k][local[e.dst]];
        cell = std::max(cell, d[k - 1][i] + e.weight);
      }
    }
  }
  std::optional<Rational> best;
  for (std::size_t v = 0; v < m; ++v) {
    if (d[m][v] == kNeg) continue;
    std::optional<Rational> worst;
    for (std::size_t k = 0; k < m; ++k) {
      if (d[k][v] == kNeg) continue;
      Rational r(d[m][v] - d[k][v], static_cast<std::int64_t>(m - k));
      if (!worst || r < *worst) worst = r;
    }
    if (worst && (!best || *worst > *best)) best = worst;
  }
  return *best;
}

bool has_internal_edge(const Graph& g, const std::vector<std::uint32_t>& members,
                       const std::vector<std::uint32_t>& comp) {
  for (auto v : members) {
    for (auto ei : g.out[v]) {
      if (comp[g.edges[ei].dst] == comp[v]) return true;
    }
  }
  return false;
}

std::vector<bool> reachable(const Graph& g, std::uint32_t from) {
  std::vector<bool> seen(g.n, false);
  std::vector<std::uint32_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto ei : g.out[v]) {
      auto w = g.edges[ei].dst;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

// A cycle of mean `mean` inside the component of `members`: reweight to
// w·den − num (all cycles ≤ 0, optimal ones = 0), take longest-path
// potentials, and search the tight edges, which contain every zero cycle.
std::vector<std::size_t> tight_cycle(const Graph& g, const std::vector<std::uint32_t>& members,
                                     const std::vector<std::uint32_t>& comp, const Rational& mean) {
  const std::uint32_t c = comp[members[0]];
  auto w = [&](const WeightedEdge& e) {
    return static_cast<__int128>(e.weight) * mean.den() - mean.num();
  };
  constexpr __int128 kNeg = std::numeric_limits<std::int64_t>::min();
  std::vector<__int128> pot(g.n, kNeg);
  pot[members[0]] = 0;
  for (std::size_t round = 0; round < members.size(); ++round) {
    bool changed = false;
    for (auto v : members) {
      if (pot[v] == kNeg) continue;
      for (auto ei : g.out[v]) {
        const auto& e = g.edges[ei];
        if (comp[e.dst] != c) continue;
        if (pot[v] + w(e) > pot[e.dst]) {
          pot[e.dst] = pot[v] + w(e);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  // Walk tight edges from the first member until a vertex repeats.
  std::vector<std::uint32_t> seen_at(g.n, kNone);
  std::vector<std::size_t> path;
  std::uint32_t v = members[0];
  // Every vertex in a strongly connected component with finite potentials
  // lies on a path of tight edges into a zero cycle only if it has a tight
  // out-edge; find one that does by restarting from tight-cycle vertices.
  std::vector<bool> dead(g.n, false);
  for (;;) {
    std::size_t pick = kNone;
    for (auto ei : g.out[v]) {
      const auto& e = g.edges[ei];
      if (comp[e.dst] == c && !dead[e.dst] && pot[v] + w(e) == pot[e.dst]) {
        pick = ei;
        break;
      }
    }
    if (pick == kNone) {
      // Dead end: back off.
      dead[v] = true;
      seen_at[v] = kNone;
      if (path.empty()) {
        auto it = std::find_if(members.begin(), members.end(), [&](auto u) { return !dead[u]; });
        v = *it;
      } else {
        v = g.edges[path.back()].src;
        path.pop_back();
      }
      continue;
    }
    seen_at[v] = static_cast<std::uint32_t>(path.size());
    path.push_back(pick);
    v = g.edges[pick].dst;
    if (seen_at[v] != kNone) {
      return {path.begin() + seen_at[v], path.end()};
    }
  }
}

}  // namespace

std::optional<CycleWitness> max_mean_cycle(std::size_t num_vertices, std::span<const WeightedEdge> edges,
                                           std::uint32_t from) {
  Graph g(num_vertices, edges);
  const auto reach = reachable(g, from);
  std::uint32_t ncomp = 0;
  const auto comp = components(g, &ncomp);
  std::vector<std::vector<std::uint32_t>> members(ncomp);
  for (std::uint32_t v = 0; v < num_vertices; ++v) {
    if (reach[v]) members[comp[v]].push_back(v);
  }
  std::optional<Rational> best;
  std::uint32_t best_comp = kNone;
  // Components in order of their least vertex, for a stable tie-break.
  std::vector<std::uint32_t> order;
  for (std::uint32_t c = 0; c < ncomp; ++c) {
    if (!members[c].empty() && has_internal_edge(g, members[c], comp)) order.push_back(c);
  }
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return members[a][0] < members[b][0]; });
  for (auto c : order) {
    Rational r = karp(g, members[c], comp);
    if (!best || r > *best) {
      best = r;
      best_comp = c;
    }
  }
  if (!best) return std::nullopt;

  CycleWitness w;
  w.mean = *best;
  w.cycle = tight_cycle(g, members[best_comp], comp, *best);
  // Shortest stem to any cycle vertex, then rotate the cycle to start there.
  std::vector<std::size_t> pos_in_cycle(num_vertices, kNone);
  for (std::size_t i = 0; i < w.cycle.size(); ++i) pos_in_cycle[edges[w.cycle[i]].src] = i;
  std::vector<std::size_t> via(num_vertices, kNone);
  std::vector<bool> seen(num_vertices, false);
  std::vector<std::uint32_t> queue{from};
  seen[from] = true;
  std::uint32_t hit = kNone;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    auto v = queue[h];
    if (pos_in_cycle[v] != kNone) {
      hit = v;
      break;
    }
    for (auto ei : g.out[v]) {
      auto u = edges[ei].dst;
      if (seen[u]) continue;
      seen[u] = true;
      via[u] = ei;
      queue.push_back(u);
    }
  }
  for (auto v = hit; v != from; v = edges[via[v]].src) w.stem.push_back(via[v]);
  std::reverse(w.stem.begin(), w.stem.end());
  std::rotate(w.cycle.begin(), w.cycle.begin() + static_cast<std::ptrdiff_t>(pos_in_cycle[hit]), w.cycle.end());
  return w;
}

std::vector<std::optional<Rational>> reachable_cycle_means(std::size_t num_vertices,
                                                           std::span<const WeightedEdge> edges,
                                                           bool maximize) {
  std::vector<WeightedEdge> flipped;
  if (!maximize) {
    flipped.assign(edges.begin(), edges.end());
    for (auto& e : flipped) e.weight = -e.weight;
    edges = flipped;
  }
  Graph g(num_vertices, edges);
  std::uint32_t ncomp = 0;
  const auto comp = components(g, &ncomp);
  std::vector<std::vector<std::uint32_t>> members(ncomp);
  for (std::uint32_t v = 0; v < num_vertices; ++v) members[comp[v]].push_back(v);
  std::vector<std::optional<Rational>> value(ncomp);
  for (std::uint32_t c = 0; c < ncomp; ++c) {  // sinks first
    if (has_internal_edge(g, members[c], comp)) value[c] = karp(g, members[c], comp);
    for (auto v : members[c]) {
      for (auto ei : g.out[v]) {
        const auto& d = value[comp[edges[ei].dst]];
        if (comp[edges[ei].dst] != c && d && (!value[c] || *d > *value[c])) value[c] = d;
      }
    }
  }
  std::vector<std::optional<Rational>> out(num_vertices);
  for (std::uint32_t v = 0; v < num_vertices; ++v) {
    out[v] = value[comp[v]];
    if (out[v] && !maximize) out[v] = -*out[v];
  }
  return out;
}

WeightedGraphGame::WeightedGraphGame(std::vector<bool> player1, std::vector<WeightedEdge> edges,
                                     std::uint32_t source, bool p1_maximizes)
    : player1_(std::move(player1)), edges_(std::move(edges)), source_(source), p1_maximizes_(p1_maximizes) {
  const std::size_t n = player1_.size();
  if (source_ >= n) throw InputError("game source is not a vertex");
  if (!player1_[source_]) throw InputError("game source must belong to Player 1");
  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.src, a.dst, a.weight) < std::tie(b.src, b.dst, b.weight);
  });
  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    if (e.src >= n || e.dst >= n) throw InputError("game edge endpoint out of range");
    if (player1_[e.src] == player1_[e.dst]) throw InputError("game edges must alternate between players");
    ++offsets_[e.src + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (offsets_[v + 1] == 0) throw InputError("game vertex " + std::to_string(v) + " has no outgoing edge");
    offsets_[v + 1] += offsets_[v];
  }
  Graph g(n, edges_);
  const auto reach = reachable(g, source_);
  for (std::size_t v = 0; v < n; ++v) {
    if (!reach[v]) throw InputError("game vertex " + std::to_string(v) + " is unreachable from the source");
  }
}

std::span<const WeightedEdge> WeightedGraphGame::out(std::uint32_t v) const {
  return {edges_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::int64_t WeightedGraphGame::max_abs_weight() const {
  std::int64_t w = 0;
  for (const auto& e : edges_) w = std::max(w, e.weight < 0 ? -e.weight : e.weight);
  return w;
}

namespace {

// Values when the strategy fixes the choices of one player; the other player
// then faces a one-player mean-cycle problem.
std::vector<Rational> fixed_side_values(const WeightedGraphGame& game, const PositionalStrategy& strategy,
                                        const std::vector<bool>& allowed, bool fix_maximizer) {
  std::vector<WeightedEdge> sub;
  for (std::uint32_t v = 0; v < game.num_vertices(); ++v) {
    if (game.maximizer(v) == fix_maximizer) {
      sub.push_back(game.edges()[strategy[v]]);
    } else {
      for (std::size_t i = game.first_edge(v); i < game.end_edge(v); ++i) {
        if (allowed.empty() || allowed[i]) sub.push_back(game.edges()[i]);
      }
    }
  }
  auto means = reachable_cycle_means(game.num_vertices(), sub, !fix_maximizer);
  std::vector<Rational> out;
  out.reserve(means.size());
  for (auto& m : means) out.push_back(*m);
  return out;
}

Rational round_to_denominator(std::int64_t total, std::int64_t t, std::size_t n) {
  // Closest p/q with q ≤ n to total/t.
  std::optional<Rational> best;
  Rational x(total, t);
  for (std::int64_t q = 1; q <= static_cast<std::int64_t>(std::max<std::size_t>(n, 1)); ++q) {
    const __int128 scaled = static_cast<__int128>(total) * q;
    __int128 p = scaled / t;
    if (scaled % t != 0 && scaled < 0) --p;
    for (__int128 cand : {p, p + 1}) {
      Rational r(static_cast<std::int64_t>(cand), q);
      Rational dr = r > x ? r - x : x - r;
      if (!best) {
        best = r;
      } else {
        Rational db = *best > x ? *best - x : x - *best;
        if (dr < db) best = r;
      }
    }
  }
  return *best;
}

}  // namespace

ZpSolution zp_solve(const WeightedGraphGame& game, const std::vector<bool>& allowed) {
  const std::size_t n = game.num_vertices();
  const auto& edges = game.edges();
  auto usable = [&](std::size_t i) { return allowed.empty() || allowed[i]; };
  auto edge_range = [&](std::uint32_t v) {
    return std::pair<std::size_t, std::size_t>(game.first_edge(v), game.end_edge(v));
  };
  for (std::uint32_t v = 0; v < n; ++v) {
    auto [lo, hi] = edge_range(v);
    bool any = false;
    for (auto i = lo; i < hi; ++i) any = any || usable(i);
    if (!any) throw PreconditionError("edge mask leaves a vertex without moves");
  }

  const auto w = static_cast<std::size_t>(std::max<std::int64_t>(game.max_abs_weight(), 1));
  const std::size_t bound = 4 * n * n * n * w;
  ZpSolution sol;
  sol.strategy.assign(n, 0);
  std::vector<std::int64_t> cur(n, 0), next(n, 0);
  std::vector<bool> have(n, false);
  std::size_t checkpoint = std::max<std::size_t>(n, 1);
  for (std::size_t t = 1; t <= bound; ++t) {
    for (std::uint32_t v = 0; v < n; ++v) {
      auto [lo, hi] = edge_range(v);
      const bool mx = game.maximizer(v);
      std::optional<std::int64_t> best;
      std::size_t arg = sol.strategy[v];
      for (auto i = lo; i < hi; ++i) {
        if (!usable(i)) continue;
        const std::int64_t val = edges[i].weight + cur[edges[i].dst];
        if (!best || (mx ? val > *best : val < *best)) {
          best = val;
          arg = i;
        }
      }
      // Keep the previous choice on ties so strategies settle.
      const std::size_t prev = sol.strategy[v];
      if (have[v] && usable(prev) && edges[prev].weight + cur[edges[prev].dst] == *best) arg = prev;
      next[v] = *best;
      sol.strategy[v] = arg;
      have[v] = true;
    }
    std::swap(cur, next);
    sol.iterations = t;
    if (t == checkpoint || t == bound) {
      checkpoint *= 2;
      auto lower = fixed_side_values(game, sol.strategy, allowed, true);
      auto upper = fixed_side_values(game, sol.strategy, allowed, false);
      if (lower == upper) {
        sol.values = std::move(lower);
        sol.certified = true;
        return sol;
      }
      if (t == bound) {
        sol.values.clear();
        for (std::uint32_t v = 0; v < n; ++v) {
          sol.values.push_back(round_to_denominator(cur[v], static_cast<std::int64_t>(t), n));
        }
        return sol;
      }
    }
  }
  return sol;
}

std::vector<Rational> zp_value(const WeightedGraphGame& game) { return zp_solve(game).values; }

PositionalStrategy zp_optimal_strategies(const WeightedGraphGame& game) {
  ZpSolution sol = zp_solve(game);
  if (sol.certified) return sol.strategy;
  // Prune: fix one edge per vertex as long as every value is preserved.
  std::vector<bool> mask(game.edges().size(), true);
  PositionalStrategy strategy(game.num_vertices(), 0);
  for (std::uint32_t v = 0; v < game.num_vertices(); ++v) {
    const std::size_t lo = game.first_edge(v);
    const std::size_t hi = game.end_edge(v);
    for (std::size_t keep = lo; keep < hi; ++keep) {
      std::vector<bool> trial = mask;
      for (std::size_t i = lo; i < hi; ++i) trial[i] = i == keep;
      if (zp_solve(game, trial).values == sol.values) {
        mask = trial;
        strategy[v] = keep;
        break;
      }
    }
  }
  return strategy;
}

Rational strategy_pair_value(const WeightedGraphGame& game, const PositionalStrategy& strategy,
                             std::uint32_t from) {
  std::vector<std::size_t> seen_at(game.num_vertices(), ~std::size_t{0});
  std::vector<std::size_t> path;
  std::uint32_t v = from;
  while (seen_at[v] == ~std::size_t{0}) {
    seen_at[v] = path.size();
    path.push_back(strategy[v]);
    v = game.edges()[strategy[v]].dst;
  }
  std::int64_t sum = 0;
  for (std::size_t i = seen_at[v]; i < path.size(); ++i) sum += game.edges()[path[i]].weight;
  return Rational(sum, static_cast<std::int64_t>(path.size() - seen_at[v]));
}

}  // namespace dynobs
