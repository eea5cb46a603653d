#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace dynobs::testing {
namespace {

using Entry = std::pair<StateId, int>;  // (plant state, counter: -1 fault-free)
using Belief = std::set<Entry>;

int advance(Label l, int j, unsigned k) {
  if (l.is_fault() && j < 0) return 0;
  if (j < 0) return j;
  return std::min(j + 1, static_cast<int>(k));
}

Belief close(const Plant& plant, const Observer& obs, StateId s, Belief b, unsigned k) {
  std::vector<Entry> work(b.begin(), b.end());
  while (!work.empty()) {
    auto [q, j] = work.back();
    work.pop_back();
    for (const auto& t : plant.transitions()) {
      if (t.src != q) continue;
      if (t.label.is_observable() && obs.watch(s).contains(t.label.index())) continue;
      Entry e{t.dst, advance(t.label, j, k)};
      if (b.insert(e).second) work.push_back(e);
    }
  }
  return b;
}

bool mixed(const Belief& b, unsigned k) {
  bool clean = false, late = false;
  for (auto [q, j] : b) {
    clean = clean || j < 0;
    late = late || j == static_cast<int>(k);
  }
  return clean && late;
}

}  // namespace

bool oracle_diagnosable(const Plant& raw, const Observer& obs, unsigned k) {
  const Plant plant = epsilon_complete(raw);
  std::set<std::pair<StateId, Belief>> seen;
  std::vector<std::pair<StateId, Belief>> work;
  auto push = [&](StateId s, Belief b) {
    auto item = std::make_pair(s, close(plant, obs, s, std::move(b), k));
    if (seen.insert(item).second) work.push_back(item);
  };
  push(obs.initial(), {{plant.initial(), -1}});
  while (!work.empty()) {
    auto [s, b] = work.back();
    work.pop_back();
    if (mixed(b, k)) return false;
    for (unsigned e : obs.watch(s).indices()) {
      Belief next;
      for (auto [q, j] : b) {
        for (const auto& t : plant.transitions()) {
          if (t.src == q && t.label == Label::event(e)) next.insert({t.dst, advance(t.label, j, k)});
        }
      }
      if (!next.empty()) push(obs.step(s, e), std::move(next));
    }
  }
  return true;
}

bool oracle_bounded_violation(const Plant& raw, const Observer& obs, unsigned k, unsigned max_len) {
  const Plant plant = epsilon_complete(raw);
  std::set<Word> clean, late;
  std::function<void(StateId, StateId, int, unsigned, Word&)> walk = [&](StateId q, StateId s, int j, unsigned len,
                                                                        Word& seen_obs) {
    if (j < 0) clean.insert(seen_obs);
    if (j >= static_cast<int>(k)) late.insert(seen_obs);
    if (len == max_len) return;
    for (const auto& t : plant.transitions()) {
      if (t.src != q) continue;
      const int nj = advance(t.label, j, k);
      if (t.label.is_observable() && obs.watch(s).contains(t.label.index())) {
        seen_obs.push_back(t.label);
        walk(t.dst, obs.step(s, t.label.index()), nj, len + 1, seen_obs);
        seen_obs.pop_back();
      } else {
        walk(t.dst, s, nj, len + 1, seen_obs);
      }
    }
  };
  Word w;
  walk(plant.initial(), obs.initial(), -1, 0, w);
  return std::any_of(late.begin(), late.end(), [&](const Word& x) { return clean.count(x) > 0; });
}

std::optional<unsigned> oracle_min_k(const Plant& plant, const Observer& obs, unsigned bound) {
  for (unsigned k = 0; k <= bound; ++k) {
    if (oracle_diagnosable(plant, obs, k)) return k;
  }
  return std::nullopt;
}

std::optional<Rational> oracle_max_cycle_mean(const Automaton& a, const std::vector<std::int64_t>& weight) {
  const std::size_t n = a.num_states();
  std::vector<bool> reach(n, false);
  std::vector<StateId> stack{a.initial()};
  reach[a.initial()] = true;
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (const auto& t : a.transitions()) {
      if (t.src == s && !reach[t.dst]) {
        reach[t.dst] = true;
        stack.push_back(t.dst);
      }
    }
  }
  std::set<std::pair<StateId, StateId>> arcs;
  for (const auto& t : a.transitions()) arcs.insert({t.src, t.dst});
  // Simple cycles whose least vertex is `start`.
  std::optional<Rational> best;
  std::vector<bool> on(n, false);
  std::function<void(StateId, StateId, std::int64_t, std::int64_t)> dfs = [&](StateId start, StateId v,
                                                                             std::int64_t sum, std::int64_t len) {
    for (StateId w = start; w < n; ++w) {
      if (!arcs.count({v, w})) continue;
      if (w == start) {
        Rational r(sum, len);
        if (!best || r > *best) best = r;
      } else if (!on[w]) {
        on[w] = true;
        dfs(start, w, sum + weight[w], len + 1);
        on[w] = false;
      }
    }
  };
  for (StateId s = 0; s < n; ++s) {
    if (!reach[s]) continue;
    on[s] = true;
    dfs(s, s, weight[s], 1);
    on[s] = false;
  }
  return best;
}

Rational oracle_game_value(const WeightedGraphGame& game) {
  const std::size_t n = game.num_vertices();
  std::vector<std::uint32_t> maxv, minv;
  for (std::uint32_t v = 0; v < n; ++v) (game.maximizer(v) ? maxv : minv).push_back(v);
  std::vector<std::size_t> choice(n, 0);
  auto play_value = [&] {
    std::vector<int> seen_at(n, -1);
    std::vector<std::int64_t> weights;
    std::uint32_t v = game.source();
    while (seen_at[v] < 0) {
      seen_at[v] = static_cast<int>(weights.size());
      const auto& e = game.out(v)[choice[v]];
      weights.push_back(e.weight);
      v = e.dst;
    }
    std::int64_t sum = 0;
    for (std::size_t i = static_cast<std::size_t>(seen_at[v]); i < weights.size(); ++i) sum += weights[i];
    return Rational(sum, static_cast<std::int64_t>(weights.size()) - seen_at[v]);
  };
  // Odometer over one side's choices.
  auto next = [&](const std::vector<std::uint32_t>& side) {
    for (auto v : side) {
      if (++choice[v] < game.out(v).size()) return true;
      choice[v] = 0;
    }
    return false;
  };
  std::optional<Rational> best;
  do {
    std::optional<Rational> worst;
    do {
      Rational r = play_value();
      if (!worst || r < *worst) worst = r;
    } while (next(minv));
    if (!best || *worst > *best) best = worst;
  } while (next(maxv));
  return *best;
}

Rational oracle_max_run_cost(const Plant& raw, const Observer& obs, unsigned n) {
  const Plant plant = epsilon_complete(raw);
  const std::size_t nq = plant.num_states(), ns = obs.num_states();
  constexpr std::int64_t kUnset = -1;
  std::vector<std::int64_t> cur(nq * ns, kUnset), next(nq * ns, kUnset);
  cur[plant.initial() * ns + obs.initial()] = obs.watch(obs.initial()).size();
  for (unsigned step = 0; step < n; ++step) {
    std::fill(next.begin(), next.end(), kUnset);
    for (StateId q = 0; q < nq; ++q) {
      for (StateId s = 0; s < ns; ++s) {
        const auto v = cur[q * ns + s];
        if (v == kUnset) continue;
        for (const auto& t : plant.out(q)) {
          const StateId s2 = t.label.is_observable() ? obs.step(s, t.label.index()) : s;
          auto& cell = next[t.dst * ns + s2];
          cell = std::max(cell, v + static_cast<std::int64_t>(obs.watch(s2).size()));
        }
      }
    }
    std::swap(cur, next);
  }
  return Rational(*std::max_element(cur.begin(), cur.end()), static_cast<std::int64_t>(n) + 1);
}

}  // namespace dynobs::testing
