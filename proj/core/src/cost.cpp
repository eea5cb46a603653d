#include "dynobs/cost.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "dynobs/error.hpp"

namespace dynobs {

std::int64_t watch_size(EventSet x) { return x.size(); }

MeanCycle karp_max_mean(const WeightedAutomaton& wa) {
  const Automaton& a = wa.automaton;
  if (wa.weight.size() != a.num_states()) throw PreconditionError("weight vector size differs from state count");
  std::vector<bool> seen(a.num_states(), false);
  std::vector<StateId> stack{a.initial()};
  seen[a.initial()] = true;
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    if (a.out(s).empty()) throw PreconditionError("state " + a.state_name(s) + " has no successor");
    for (const auto& t : a.out(s)) {
      if (!seen[t.dst]) {
        seen[t.dst] = true;
        stack.push_back(t.dst);
      }
    }
  }
  std::vector<WeightedEdge> edges;
  edges.reserve(a.transitions().size());
  for (const auto& t : a.transitions()) edges.push_back({t.src, t.dst, wa.weight[t.src]});
  auto cyc = max_mean_cycle(a.num_states(), edges, a.initial());
  MeanCycle out;
  out.value = cyc->mean;
  out.witness.stem.start = a.initial();
  for (auto i : cyc->stem) out.witness.stem.steps.push_back({a.transitions()[i].label, a.transitions()[i].dst});
  for (auto i : cyc->cycle) out.witness.cycle.push_back({a.transitions()[i].label, a.transitions()[i].dst});
  return out;
}

Rational word_cost(const Observer& obs, std::span<const Label> w, const WeightFn& weight) {
  StateId s = obs.initial();
  std::int64_t sum = weight(obs.watch(s));
  for (Label l : w) {
    if (!l.is_observable() || l.index() >= obs.alphabet().size()) {
      throw InputError("word symbol outside the observer alphabet");
    }
    s = obs.step(s, l.index());
    sum += weight(obs.watch(s));
  }
  return Rational(sum, static_cast<std::int64_t>(w.size() + 1));
}

Rational run_cost(const Plant& plant, const Observer& obs, const Run& run, const WeightFn& weight) {
  if (!plant.accepts_run(run)) throw PreconditionError("run does not follow the plant");
  StateId s = obs.initial();
  std::int64_t sum = weight(obs.watch(s));
  for (const auto& st : run.steps) {
    if (st.label.is_observable()) s = obs.step(s, st.label.index());
    sum += weight(obs.watch(s));
  }
  return Rational(sum, static_cast<std::int64_t>(run.length() + 1));
}

WeightedAutomaton cost_product(const Plant& plant, const Observer& obs, const WeightFn& weight) {
  if (!(plant.alphabet() == obs.alphabet())) throw InputError("observer alphabet differs from plant alphabet");
  Automaton a = epsilon_complete(plant);
  std::map<std::pair<StateId, StateId>, StateId> index;
  std::vector<std::pair<StateId, StateId>> pairs;
  auto intern = [&](StateId q, StateId s) {
    auto [it, fresh] = index.emplace(std::make_pair(q, s), static_cast<StateId>(pairs.size()));
    if (fresh) pairs.emplace_back(q, s);
    return it->second;
  };
  intern(a.initial(), obs.initial());
  std::vector<Transition> ts;
  for (std::size_t h = 0; h < pairs.size(); ++h) {
    auto [q, s] = pairs[h];
    for (const auto& t : a.out(q)) {
      const StateId s2 = t.label.is_observable() ? obs.step(s, t.label.index()) : s;
      ts.push_back({static_cast<StateId>(h), t.label, intern(t.dst, s2)});
    }
  }
  WeightedAutomaton wa;
  std::vector<std::string> names;
  for (auto [q, s] : pairs) {
    names.push_back("(" + a.state_name(q) + "," + obs.state_name(s) + ")");
    wa.weight.push_back(weight(obs.watch(s)));
  }
  wa.automaton = Automaton(a.name() + "+x" + obs.name() + "+", a.alphabet(), std::move(names), 0, std::move(ts));
  return wa;
}

MeanCycle observer_cost_witness(const Plant& plant, const Observer& obs, const WeightFn& weight) {
  return karp_max_mean(cost_product(plant, obs, weight));
}

Rational observer_cost(const Plant& plant, const Observer& obs, const WeightFn& weight) {
  return observer_cost_witness(plant, obs, weight).value;
}

CostGame build_cost_game(const Plant& plant, const MostPermissiveObserver& mpo, const WeightFn& weight,
                         const Observer* restrict_to) {
  if (!(plant.alphabet() == mpo.alphabet)) throw InputError("mpo alphabet differs from plant alphabet");
  if (restrict_to && !(restrict_to->alphabet() == mpo.alphabet)) {
    throw InputError("observer alphabet differs from plant alphabet");
  }
  Automaton a = epsilon_complete(plant);
  CostGame cg;
  std::map<std::tuple<bool, bool, StateId, std::uint32_t, StateId>, std::uint32_t> index;
  std::vector<bool> player1;
  auto intern = [&](bool p1, bool completion, StateId q, std::uint32_t node, StateId s) {
    auto key = std::make_tuple(p1, completion, q, node, s);
    auto [it, fresh] = index.emplace(key, static_cast<std::uint32_t>(cg.vertices.size()));
    if (fresh) {
      cg.vertices.push_back({q, node, completion, s});
      player1.push_back(p1);
    }
    return it->second;
  };
  const StateId s0 = restrict_to ? restrict_to->initial() : 0;
  intern(true, false, a.initial(), mpo.initial, s0);
  std::vector<WeightedEdge> edges;
  for (std::size_t h = 0; h < cg.vertices.size(); ++h) {
    const auto v = cg.vertices[h];
    const auto src = static_cast<std::uint32_t>(h);
    if (player1[h] && v.completion) {
      const auto& odd = mpo.odds[v.node];
      edges.push_back({src, intern(false, false, v.plant_state, v.node, v.observer_state), weight(odd.watch)});
    } else if (player1[h]) {
      const auto& even = mpo.evens[v.node];
      for (std::size_t i = 0; i < even.allowed.size(); ++i) {
        if (restrict_to && even.allowed[i] != restrict_to->watch(v.observer_state)) continue;
        edges.push_back({src, intern(false, false, v.plant_state, even.odd[i], v.observer_state),
                         weight(even.allowed[i])});
      }
      if (restrict_to && !mpo.find_allowed(v.node, restrict_to->watch(v.observer_state))) {
        throw PreconditionError("observer picks a watch-set the mpo does not allow");
      }
    } else {
      const auto& odd = mpo.odds[v.node];
      for (const auto& t : a.out(v.plant_state)) {
        std::uint32_t dst;
        if (odd.watch.contains(t.label)) {
          std::uint32_t target = 0;
          for (const auto& [e, tgt] : odd.observe) {
            if (e == t.label.index()) target = tgt;
          }
          const StateId s2 = restrict_to ? restrict_to->step(v.observer_state, t.label.index()) : 0;
          dst = intern(true, false, t.dst, target, s2);
        } else {
          dst = intern(true, true, t.dst, v.node, v.observer_state);
        }
        edges.push_back({src, dst, 0});
      }
    }
  }
  cg.game = WeightedGraphGame(std::move(player1), std::move(edges), 0, /*p1_maximizes=*/false);
  return cg;
}

std::optional<OptimalObserver> optimal_cost_observer(const Plant& plant, unsigned k, const WeightFn& weight,
                                                     std::size_t cap) {
  auto mpo = most_permissive_observer(plant, k, cap);
  if (!mpo) return std::nullopt;
  CostGame cg = build_cost_game(plant, *mpo, weight);
  const auto& game = cg.game;
  ZpSolution sol = zp_solve(game);
  const Rational target = sol.values[game.source()];

  OptimalObserver out;
  out.cost = target * 2;
  out.game_vertices = game.num_vertices();
  out.iterations = sol.iterations;

  // An observer cannot see the plant state, so fix one watch-set per mpo
  // node across all plant states, keeping the source value when possible.
  std::vector<std::vector<std::uint32_t>> choice_vertices(mpo->evens.size());
  for (std::uint32_t v = 0; v < game.num_vertices(); ++v) {
    if (game.player1(v) && !cg.vertices[v].completion) choice_vertices[cg.vertices[v].node].push_back(v);
  }
  std::vector<bool> mask(game.edges().size(), true);
  std::map<std::uint32_t, EventSet> fixed;
  bool tight = true;
  for (std::uint32_t node = 0; node < mpo->evens.size(); ++node) {
    if (choice_vertices[node].empty()) continue;
    std::vector<EventSet> order = mpo->evens[node].allowed;
    std::stable_sort(order.begin(), order.end(), [](EventSet a, EventSet b) {
      return a.size() != b.size() ? a.size() < b.size() : lex_less(a, b);
    });
    struct Trial {
      Rational value;
      std::vector<bool> mask;
      EventSet watch;
    };
    std::optional<Trial> best;
    for (EventSet x : order) {
      const auto slot = *mpo->find_allowed(node, x);
      const std::uint32_t odd = mpo->evens[node].odd[slot];
      std::vector<bool> trial = mask;
      for (auto v : choice_vertices[node]) {
        for (std::size_t i = game.first_edge(v); i < game.end_edge(v); ++i) {
          trial[i] = mask[i] && cg.vertices[game.edges()[i].dst].node == odd;
        }
      }
      const Rational val = zp_solve(game, trial).values[game.source()];
      if (!best || val < best->value) best = Trial{val, std::move(trial), x};
      if (val == target) break;
    }
    tight = tight && best->value == target;
    mask = std::move(best->mask);
    fixed[node] = best->watch;
  }
  Selector pick = [&](std::uint32_t node, std::span<const EventSet> allowed) {
    auto it = fixed.find(node);
    return it != fixed.end() ? it->second : select_smallest(node, allowed);
  };
  out.observer = extract_observer(*mpo, pick, "optimal");
  out.observer_cost = observer_cost(plant, out.observer, weight);
  out.tight = tight && out.observer_cost == out.cost;
  return out;
}

std::optional<Observer> bounded_cost_observer(const Plant& plant, unsigned k, const Rational& budget,
                                              const WeightFn& weight, std::size_t cap) {
  if (budget < Rational(0)) throw PreconditionError("budget must be non-negative");
  auto opt = optimal_cost_observer(plant, k, weight, cap);
  if (!opt || opt->observer_cost > budget) return std::nullopt;
  return opt->observer;
}

}  // namespace dynobs
