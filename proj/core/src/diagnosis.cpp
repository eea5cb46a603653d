#include "dynobs/diagnosis.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "dynobs/error.hpp"
#include "dynobs/product.hpp"

namespace dynobs {
namespace {

enum class Move : std::uint8_t { kLeft, kRight, kJoint };

using TwinId = std::uint64_t;

struct TwinEdge {
  TwinId target;
  Move move;
  Step left;
  Step right;
};

// Twin product of a fault-tracking left copy with a fault-free right copy.
// Left state carries j ∈ {-1..bound}: -1 before the fault, then the number
// of left steps since the fault, saturating at `bound`. Only left steps
// advance j. Events in `visible` synchronise; everything else interleaves.
class Twin {
 public:
  Twin(const Automaton& a, EventSet visible, unsigned bound)
      : a_(a), visible_(visible), bound_(bound), n_(a.num_states()) {}

  TwinId encode(StateId left, int j, StateId right) const {
    return (TwinId{left} * (bound_ + 2) + static_cast<unsigned>(j + 1)) * n_ + right;
  }
  StateId left(TwinId id) const { return static_cast<StateId>(id / n_ / (bound_ + 2)); }
  int counter(TwinId id) const { return static_cast<int>(id / n_ % (bound_ + 2)) - 1; }
  StateId right(TwinId id) const { return static_cast<StateId>(id % n_); }
  TwinId initial() const { return encode(a_.initial(), -1, a_.initial()); }

  int bump(int j) const { return j >= 0 ? std::min(j + 1, static_cast<int>(bound_)) : j; }

  std::vector<TwinEdge> successors(TwinId id) const {
    std::vector<TwinEdge> out;
    const StateId q1 = left(id);
    const StateId q2 = right(id);
    const int j = counter(id);
    for (const auto& t : a_.out(q1)) {
      if (visible_.contains(t.label)) continue;
      const int nj = (t.label.is_fault() && j < 0) ? 0 : bump(j);
      out.push_back({encode(t.dst, nj, q2), Move::kLeft, {t.label, t.dst}, {}});
    }
    for (const auto& t : a_.out(q2)) {
      if (visible_.contains(t.label) || t.label.is_fault()) continue;
      out.push_back({encode(q1, j, t.dst), Move::kRight, {}, {t.label, t.dst}});
    }
    for (const auto& t1 : a_.out(q1)) {
      if (!visible_.contains(t1.label)) continue;
      for (const auto& t2 : a_.out(q2)) {
        if (t2.label != t1.label) continue;
        out.push_back({encode(t1.dst, bump(j), t2.dst), Move::kJoint, {t1.label, t1.dst},
                       {t2.label, t2.dst}});
      }
    }
    return out;
  }

 private:
  const Automaton& a_;
  EventSet visible_;
  unsigned bound_;
  std::size_t n_;
};

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Reachable twin states in BFS order; parent and via are indexed by
// position in `order`.
struct Exploration {
  std::vector<TwinId> order;
  std::vector<std::uint32_t> parent;
  std::vector<TwinEdge> via;
  std::unordered_map<TwinId, std::uint32_t> index;
  std::uint32_t hit = kNone;  // first state satisfying the stop predicate
};

template <typename Stop>
Exploration explore(const Twin& twin, Stop stop) {
  Exploration ex;
  auto visit = [&](TwinId id, std::uint32_t parent, const TwinEdge& via) {
    ex.index.emplace(id, static_cast<std::uint32_t>(ex.order.size()));
    ex.order.push_back(id);
    ex.parent.push_back(parent);
    ex.via.push_back(via);
  };
  visit(twin.initial(), kNone, {});
  for (std::uint32_t head = 0; head < ex.order.size(); ++head) {
    if (stop(ex.order[head])) {
      ex.hit = head;
      return ex;
    }
    for (const auto& e : twin.successors(ex.order[head])) {
      if (!ex.index.contains(e.target)) visit(e.target, head, e);
    }
  }
  return ex;
}

std::vector<TwinEdge> path_to(const Exploration& ex, std::uint32_t target) {
  std::vector<TwinEdge> path;
  for (auto cur = target; ex.parent[cur] != kNone; cur = ex.parent[cur]) path.push_back(ex.via[cur]);
  std::reverse(path.begin(), path.end());
  return path;
}

void split(const std::vector<TwinEdge>& path, std::vector<Step>& left, std::vector<Step>& right) {
  for (const auto& e : path) {
    if (e.move != Move::kRight) left.push_back(e.left);
    if (e.move != Move::kLeft) right.push_back(e.right);
  }
}

Counterexample finite_pair(const Exploration& ex, StateId init) {
  Counterexample cx;
  cx.faulty.stem.start = init;
  cx.non_faulty.stem.start = init;
  split(path_to(ex, ex.hit), cx.faulty.stem.steps, cx.non_faulty.stem.steps);
  return cx;
}

// Searches the flag-only twin product (bound 0) for a reachable cycle in
// the faulty region containing a left step; such a cycle pumps the
// post-fault length without changing the observation.
std::optional<Counterexample> pumpable_lasso(const Automaton& a, EventSet visible,
                                             std::size_t* faulty_states) {
  Twin twin(a, visible, 0);
  auto ex = explore(twin, [](TwinId) { return false; });
  const std::size_t n = ex.order.size();

  // Successors as (edge, target index).
  std::vector<std::vector<std::pair<TwinEdge, std::uint32_t>>> succ(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& e : twin.successors(ex.order[v])) succ[v].emplace_back(e, ex.index.at(e.target));
  }
  auto faulty = [&](std::size_t v) { return twin.counter(ex.order[v]) >= 0; };
  if (faulty_states) {
    std::size_t count = 0;
    for (std::size_t v = 0; v < n; ++v) count += faulty(v);
    *faulty_states = count;
  }

  // Tarjan's SCC, iterative.
  std::vector<std::uint32_t> comp(n, kNone), low(n, 0), num(n, kNone);
  std::vector<std::uint32_t> stack;
  std::vector<bool> on_stack(n, false);
  std::uint32_t counter = 0, ncomp = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (num[root] != kNone) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> call{{root, 0}};
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < succ[v].size()) {
        auto w = succ[v][i++].second;
        if (num[w] == kNone) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], num[w]);
        }
      } else {
        if (low[v] == num[v]) {
          std::uint32_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
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

  for (std::uint32_t v = 0; v < n; ++v) {
    if (!faulty(v)) continue;
    for (const auto& [e, t] : succ[v]) {
      if (e.move == Move::kRight || comp[t] != comp[v]) continue;
      // Close the cycle: shortest path from t back to v inside the SCC.
      std::unordered_map<std::uint32_t, std::pair<std::uint32_t, TwinEdge>> back_edge;
      std::vector<std::uint32_t> queue{t};
      back_edge.emplace(t, std::make_pair(kNone, TwinEdge{}));
      for (std::size_t h = 0; h < queue.size() && !back_edge.contains(v); ++h) {
        const auto cur = queue[h];
        for (const auto& [f, u] : succ[cur]) {
          if (comp[u] != comp[v] || back_edge.contains(u)) continue;
          back_edge.emplace(u, std::make_pair(cur, f));
          queue.push_back(u);
        }
      }
      std::vector<TwinEdge> cycle{e};
      std::vector<TwinEdge> back;
      for (auto cur = v; cur != t; cur = back_edge.at(cur).first) back.push_back(back_edge.at(cur).second);
      std::reverse(back.begin(), back.end());
      cycle.insert(cycle.end(), back.begin(), back.end());

      Counterexample cx;
      cx.faulty.stem.start = cx.non_faulty.stem.start = a.initial();
      split(path_to(ex, v), cx.faulty.stem.steps, cx.non_faulty.stem.steps);
      split(cycle, cx.faulty.cycle, cx.non_faulty.cycle);
      return cx;
    }
  }
  return std::nullopt;
}

struct Analysis {
  bool diagnosable;
  std::optional<unsigned> min_k;
  std::optional<Counterexample> counterexample;
  std::size_t twin_states;
};

bool bad_reachable(const Automaton& a, EventSet visible, unsigned k) {
  Twin twin(a, visible, k);
  auto ex = explore(twin, [&](TwinId v) { return twin.counter(v) == static_cast<int>(k); });
  return ex.hit != kNone;
}

Analysis analyse(const Automaton& a, EventSet visible, unsigned k) {
  Analysis out{};
  std::size_t faulty_states = 0;
  auto lasso = pumpable_lasso(a, visible, &faulty_states);

  Twin twin(a, visible, k);
  auto ex = explore(twin, [&](TwinId v) { return twin.counter(v) == static_cast<int>(k); });
  out.twin_states = ex.order.size();
  out.diagnosable = ex.hit == kNone;
  if (!out.diagnosable) out.counterexample = lasso ? *lasso : finite_pair(ex, a.initial());

  if (!lasso) {
    // Without a pumpable cycle every violating pair has fewer than
    // `faulty_states` post-fault left steps, so that delay always works.
    unsigned lo = 0;
    auto hi = static_cast<unsigned>(faulty_states);
    while (lo < hi) {
      unsigned mid = lo + (hi - lo) / 2;
      if (bad_reachable(a, visible, mid)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    out.min_k = lo;
  }
  return out;
}

Verdict to_verdict(const Analysis& an, unsigned k, bool completed) {
  Verdict v;
  v.k = k;
  v.diagnosable = an.diagnosable;
  v.min_k = an.min_k;
  v.counterexample = an.counterexample;
  v.epsilon_completed = completed;
  v.twin_states = an.twin_states;
  return v;
}

}  // namespace

Verdict check_static(const Plant& plant, EventSet sub, unsigned k) {
  if (!sub.subset_of(plant.alphabet().all())) throw InputError("watch-set outside the plant alphabet");
  Automaton a = epsilon_complete(plant);
  const bool completed = a.transitions().size() != plant.transitions().size();
  return to_verdict(analyse(a, sub, k), k, completed);
}

Verdict check_dynamic(const Plant& plant, const Observer& obs, unsigned k) {
  if (!(plant.alphabet() == obs.alphabet())) {
    throw InputError("observer alphabet differs from plant alphabet");
  }
  Automaton a = epsilon_complete(plant);
  const bool completed = a.transitions().size() != plant.transitions().size();
  MaskedProduct mp = masked_product(a, obs);
  Verdict v = to_verdict(analyse(mp.automaton, mp.automaton.alphabet().all(), k), k, completed);
  if (v.counterexample) {
    v.counterexample->faulty = mp.to_plant_lasso(v.counterexample->faulty);
    v.counterexample->non_faulty = mp.to_plant_lasso(v.counterexample->non_faulty);
  }
  return v;
}

std::optional<unsigned> min_k_static(const Plant& plant, EventSet sub) {
  return check_static(plant, sub, 0).min_k;
}

std::optional<unsigned> min_k_dynamic(const Plant& plant, const Observer& obs) {
  return check_dynamic(plant, obs, 0).min_k;
}

}  // namespace dynobs
