#include "dynobs/synthesis.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "dynobs/error.hpp"

namespace dynobs {

std::optional<std::size_t> MostPermissiveObserver::find_allowed(std::uint32_t node, EventSet x) const {
  const auto& a = evens.at(node).allowed;
  auto it = std::find(a.begin(), a.end(), x);
  if (it == a.end()) return std::nullopt;
  return static_cast<std::size_t>(it - a.begin());
}

bool operator==(const MostPermissiveObserver& a, const MostPermissiveObserver& b) {
  if (!(a.alphabet == b.alphabet) || a.k != b.k || a.initial != b.initial) return false;
  if (a.evens.size() != b.evens.size() || a.odds.size() != b.odds.size()) return false;
  for (std::size_t i = 0; i < a.evens.size(); ++i) {
    if (a.evens[i].allowed != b.evens[i].allowed || a.evens[i].odd != b.evens[i].odd) return false;
  }
  for (std::size_t i = 0; i < a.odds.size(); ++i) {
    if (a.odds[i].even != b.odds[i].even || a.odds[i].watch != b.odds[i].watch ||
        a.odds[i].observe != b.odds[i].observe) {
      return false;
    }
  }
  return true;
}

std::optional<MostPermissiveObserver> most_permissive_observer(const Plant& plant, unsigned k,
                                                               std::size_t cap, SynthesisStats* stats) {
  GameArena arena(plant, k, cap);
  KnowledgeArena kg = build_knowledge_game(arena, cap);
  SafetySolution sol = solve_safety(kg);
  if (stats) {
    stats->arena_vertices = arena.vertices().size();
    stats->knowledge_states = kg.knowledge.size();
    stats->winning_states = static_cast<std::size_t>(std::count(sol.winning.begin(), sol.winning.end(), true));
  }
  if (!sol.winning[kg.initial]) return std::nullopt;

  MostPermissiveObserver mpo;
  mpo.alphabet = kg.alphabet;
  mpo.k = k;
  const std::size_t family = std::size_t{1} << kg.alphabet.size();

  // Even nodes in breadth-first order; the unconstrained node is created on
  // first use and keyed by kUnconstrained.
  constexpr std::uint32_t kUnconstrained = ~0u;
  std::map<std::uint32_t, std::uint32_t> node_of;
  std::vector<std::uint32_t> queue;
  auto node = [&](std::uint32_t knowledge) {
    auto [it, fresh] = node_of.emplace(knowledge, static_cast<std::uint32_t>(mpo.evens.size()));
    if (fresh) {
      mpo.evens.emplace_back();
      queue.push_back(knowledge);
    }
    return it->second;
  };
  mpo.initial = node(kg.initial);
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const std::uint32_t knowledge = queue[h];
    const std::uint32_t even = node_of[knowledge];
    std::vector<EventSet> allowed;
    if (knowledge == kUnconstrained) {
      for (std::size_t m = 0; m < family; ++m) allowed.emplace_back(static_cast<std::uint32_t>(m));
      std::sort(allowed.begin(), allowed.end(), lex_less);
    } else {
      allowed = sol.allowed[knowledge];
    }
    std::vector<std::uint32_t> odd_ids;
    for (EventSet x : allowed) {
      MostPermissiveObserver::Odd odd;
      odd.even = even;
      odd.watch = x;
      for (unsigned e : x.indices()) {
        std::uint32_t target = kUnconstrained;
        if (knowledge != kUnconstrained) {
          for (const auto& [ev, succ] : kg.choices[knowledge][x.mask()].successors) {
            if (ev == e) target = succ;
          }
        }
        odd.observe.emplace_back(e, node(target));
      }
      odd_ids.push_back(static_cast<std::uint32_t>(mpo.odds.size()));
      mpo.odds.push_back(std::move(odd));
    }
    mpo.evens[even].allowed = std::move(allowed);
    mpo.evens[even].odd = std::move(odd_ids);
  }
  return mpo;
}

MembershipResult mpo_membership(const MostPermissiveObserver& mpo, const Observer& obs) {
  if (!(mpo.alphabet == obs.alphabet())) throw InputError("observer alphabet differs from the mpo alphabet");
  const std::size_t ns = obs.num_states();
  const std::size_t total = mpo.evens.size() * ns;
  constexpr std::size_t kNone = ~std::size_t{0};
  std::vector<std::size_t> parent(total, kNone);
  std::vector<unsigned> via(total, 0);
  std::vector<bool> seen(total, false);
  auto id = [&](std::uint32_t even, StateId s) { return even * ns + s; };

  std::vector<std::size_t> queue{id(mpo.initial, obs.initial())};
  seen[queue[0]] = true;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const std::size_t cur = queue[h];
    const auto even = static_cast<std::uint32_t>(cur / ns);
    const auto s = static_cast<StateId>(cur % ns);
    const EventSet x = obs.watch(s);
    auto slot = mpo.find_allowed(even, x);
    if (!slot) {
      AnnotatedHistory hist;
      for (std::size_t v = cur; v != kNone; v = parent[v]) {
        hist.watches.push_back(obs.watch(static_cast<StateId>(v % ns)));
        if (parent[v] != kNone) hist.events.push_back(Label::event(via[v]));
      }
      std::reverse(hist.watches.begin(), hist.watches.end());
      std::reverse(hist.events.begin(), hist.events.end());
      return {false, std::move(hist)};
    }
    const auto& odd = mpo.odds[mpo.evens[even].odd[*slot]];
    for (const auto& [e, target] : odd.observe) {
      const std::size_t nxt = id(target, obs.step(s, e));
      if (seen[nxt]) continue;
      seen[nxt] = true;
      parent[nxt] = cur;
      via[nxt] = e;
      queue.push_back(nxt);
    }
  }
  return {};
}

EventSet select_lex_least(std::uint32_t, std::span<const EventSet> allowed) {
  if (allowed.empty()) throw PreconditionError("selector applied to an empty family");
  return *std::min_element(allowed.begin(), allowed.end(), lex_less);
}

EventSet select_smallest(std::uint32_t, std::span<const EventSet> allowed) {
  if (allowed.empty()) throw PreconditionError("selector applied to an empty family");
  return *std::min_element(allowed.begin(), allowed.end(), [](EventSet a, EventSet b) {
    return a.size() != b.size() ? a.size() < b.size() : lex_less(a, b);
  });
}

EventSet select_largest(std::uint32_t, std::span<const EventSet> allowed) {
  if (allowed.empty()) throw PreconditionError("selector applied to an empty family");
  return *std::min_element(allowed.begin(), allowed.end(), [](EventSet a, EventSet b) {
    return a.size() != b.size() ? a.size() > b.size() : lex_less(a, b);
  });
}

Selector select_random(std::uint64_t seed) {
  return [seed](std::uint32_t node, std::span<const EventSet> allowed) {
    if (allowed.empty()) throw PreconditionError("selector applied to an empty family");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), node};
    std::mt19937_64 rng(seq);
    return allowed[std::uniform_int_distribution<std::size_t>(0, allowed.size() - 1)(rng)];
  };
}

Selector selector_by_name(const std::string& name, std::uint64_t seed) {
  if (name == "lex") return select_lex_least;
  if (name == "smallest") return select_smallest;
  if (name == "largest") return select_largest;
  if (name == "random") return select_random(seed);
  throw InputError("unknown selector '" + name + "'");
}

Observer extract_observer(const MostPermissiveObserver& mpo, const Selector& selector,
                          const std::string& name) {
  std::map<std::uint32_t, StateId> state_of;
  std::vector<std::uint32_t> nodes;
  auto state = [&](std::uint32_t even) {
    auto [it, fresh] = state_of.emplace(even, static_cast<StateId>(nodes.size()));
    if (fresh) nodes.push_back(even);
    return it->second;
  };
  ObserverDraft d;
  d.name = name;
  d.alphabet = mpo.alphabet;
  d.initial = state(mpo.initial);
  for (std::size_t h = 0; h < nodes.size(); ++h) {
    const auto& even = mpo.evens[nodes[h]];
    const EventSet x = selector(nodes[h], even.allowed);
    auto slot = mpo.find_allowed(nodes[h], x);
    if (!slot) throw PreconditionError("selector returned a watch-set that is not allowed");
    d.watch.push_back(x.indices());
    for (const auto& [e, target] : mpo.odds[even.odd[*slot]].observe) {
      d.edges.push_back({static_cast<StateId>(h), e, state(target)});
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) d.states.push_back(std::to_string(i));
  return Observer(d);
}

EventSet TraceStrategy::operator()(std::span<const std::size_t> history) const {
  std::uint32_t at = arena_.initial();
  StateId s = obs_.initial();
  for (std::size_t ei : history) {
    if (ei >= arena_.edges().size()) throw PreconditionError("edge index out of range");
    const auto& e = arena_.edges()[ei];
    if (e.src != at) throw PreconditionError("history is not a path of the arena");
    if (e.kind == MoveKind::kJoint) s = obs_.step(s, e.label.index());
    at = e.dst;
  }
  if (!arena_.vertices()[at].player1) throw PreconditionError("history must end at a Player 1 vertex");
  return obs_.watch(s);
}

TraceStrategy observer_to_strategy(const Observer& obs, const GameArena& arena) {
  if (!(obs.alphabet() == arena.plant().alphabet())) {
    throw InputError("observer alphabet differs from the plant alphabet");
  }
  return TraceStrategy(obs, arena);
}

}  // namespace dynobs
