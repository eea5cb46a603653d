#include "dynobs/game.hpp"

#include <algorithm>
#include <map>

#include "dynobs/error.hpp"

namespace dynobs {
namespace {

std::size_t choice_count(unsigned events, std::size_t cap) {
  if (events >= 63 || (std::size_t{1} << events) > cap) {
    throw ResourceError("watch-set family too large", cap);
  }
  return std::size_t{1} << events;
}

}  // namespace

int GameArena::bump(int j) const { return j >= 0 ? std::min(j + 1, static_cast<int>(k_)) : j; }

std::vector<GameArena::Move> GameArena::silent_moves(const Triple& t, EventSet x) const {
  std::vector<Move> out;
  for (const auto& tr : plant_.out(t.left)) {
    if (x.contains(tr.label)) continue;
    const int j = (tr.label.is_fault() && t.j < 0) ? 0 : bump(t.j);
    out.push_back({MoveKind::kSilentLeft, tr.label, {tr.dst, j, t.right}});
  }
  for (const auto& tr : plant_.out(t.right)) {
    if (x.contains(tr.label) || tr.label.is_fault()) continue;
    out.push_back({MoveKind::kSilentRight, tr.label, {t.left, t.j, tr.dst}});
  }
  return out;
}

std::vector<Triple> GameArena::joint_moves(const Triple& t, unsigned event) const {
  std::vector<Triple> out;
  const Label l = Label::event(event);
  for (const auto& t1 : plant_.out(t.left)) {
    if (t1.label != l) continue;
    for (const auto& t2 : plant_.out(t.right)) {
      if (t2.label == l) out.push_back({t1.dst, bump(t.j), t2.dst});
    }
  }
  return out;
}

GameArena::GameArena(const Plant& plant, unsigned k, std::size_t cap)
    : plant_(epsilon_complete(plant)), k_(k) {
  const unsigned n = plant_.alphabet().size();
  const std::size_t family = choice_count(n, cap);

  std::map<std::pair<Triple, std::uint32_t>, std::uint32_t> index;  // (triple, mask or ~0)
  constexpr std::uint32_t kP1 = ~0u;
  auto intern = [&](const Triple& t, bool p1, EventSet x) {
    auto key = std::make_pair(t, p1 ? kP1 : x.mask());
    auto [it, fresh] = index.emplace(key, static_cast<std::uint32_t>(vertices_.size()));
    if (fresh) {
      if (vertices_.size() >= cap) throw ResourceError("game arena too large", cap);
      vertices_.push_back({t, p1, p1 ? EventSet() : x});
    }
    return it->second;
  };

  intern({plant_.initial(), -1, plant_.initial()}, true, {});
  std::vector<std::vector<Edge>> adj;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    const Vertex cur = vertices_[v];
    std::vector<Edge> es;
    const auto src = static_cast<std::uint32_t>(v);
    if (cur.player1) {
      for (std::size_t m = 0; m < family; ++m) {
        EventSet x(static_cast<std::uint32_t>(m));
        es.push_back({src, intern(cur.triple, false, x), MoveKind::kChoice, x, {}});
      }
    } else {
      for (const auto& mv : silent_moves(cur.triple, cur.choice)) {
        es.push_back({src, intern(mv.target, false, cur.choice), mv.kind, cur.choice, mv.label});
      }
      for (unsigned e : cur.choice.indices()) {
        for (const auto& t : joint_moves(cur.triple, e)) {
          es.push_back({src, intern(t, true, {}), MoveKind::kJoint, cur.choice, Label::event(e)});
        }
      }
    }
    adj.push_back(std::move(es));
  }

  // Renumber so that Player 1 vertices come first, keeping discovery order.
  std::vector<std::uint32_t> perm(vertices_.size());
  std::uint32_t next = 0;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v].player1) perm[v] = next++;
  }
  num_p1_ = next;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (!vertices_[v].player1) perm[v] = next++;
  }
  std::vector<Vertex> renumbered(vertices_.size());
  std::vector<std::vector<Edge>> radj(vertices_.size());
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    renumbered[perm[v]] = vertices_[v];
    for (auto e : adj[v]) {
      e.src = perm[e.src];
      e.dst = perm[e.dst];
      radj[perm[v]].push_back(e);
    }
  }
  vertices_ = std::move(renumbered);
  offsets_.push_back(0);
  for (auto& es : radj) {
    edges_.insert(edges_.end(), es.begin(), es.end());
    offsets_.push_back(edges_.size());
  }
}

std::span<const GameArena::Edge> GameArena::out(std::uint32_t v) const {
  return {edges_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

GameArena build_game(const Plant& plant, unsigned k, std::size_t cap) {
  return GameArena(plant, k, cap);
}

KnowledgeArena build_knowledge_game(const GameArena& arena, std::size_t cap) {
  KnowledgeArena kg;
  kg.k = arena.k();
  kg.alphabet = arena.plant().alphabet();
  const unsigned n = kg.alphabet.size();
  const std::size_t family = choice_count(n, cap);
  const int bad = static_cast<int>(arena.k());

  std::map<std::vector<Triple>, std::uint32_t> index;
  auto intern = [&](std::vector<Triple> k) {
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    auto [it, fresh] = index.emplace(k, static_cast<std::uint32_t>(kg.knowledge.size()));
    if (fresh) {
      if (kg.knowledge.size() >= cap) throw ResourceError("knowledge game too large", cap);
      kg.knowledge.push_back(std::move(k));
    }
    return it->second;
  };

  const StateId q0 = arena.plant().initial();
  kg.initial = intern({{q0, -1, q0}});
  for (std::size_t ki = 0; ki < kg.knowledge.size(); ++ki) {
    std::vector<KnowledgeArena::Choice> cs(family);
    for (std::size_t m = 0; m < family; ++m) {
      auto& c = cs[m];
      c.watch = EventSet(static_cast<std::uint32_t>(m));
      std::vector<Triple> closure = kg.knowledge[ki];
      std::sort(closure.begin(), closure.end());
      for (std::size_t h = 0; h < closure.size(); ++h) {
        for (const auto& mv : arena.silent_moves(closure[h], c.watch)) {
          // Linear membership is fine at the sizes this is meant for.
          if (std::find(closure.begin(), closure.end(), mv.target) == closure.end()) {
            closure.push_back(mv.target);
          }
        }
      }
      c.losing = std::any_of(closure.begin(), closure.end(), [&](const Triple& t) { return t.j == bad; });
      if (c.losing) continue;
      for (unsigned e : c.watch.indices()) {
        std::vector<Triple> succ;
        for (const auto& t : closure) {
          auto img = arena.joint_moves(t, e);
          succ.insert(succ.end(), img.begin(), img.end());
        }
        if (succ.empty()) continue;
        c.successors.emplace_back(e, intern(std::move(succ)));
      }
    }
    kg.choices.push_back(std::move(cs));
  }
  return kg;
}

SafetySolution solve_safety(const KnowledgeArena& kg) {
  const std::size_t n = kg.knowledge.size();
  SafetySolution sol;
  sol.winning.assign(n, true);
  auto ok = [&](const KnowledgeArena::Choice& c) {
    return !c.losing && std::all_of(c.successors.begin(), c.successors.end(),
                                    [&](const auto& s) { return sol.winning[s.second]; });
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t ki = 0; ki < n; ++ki) {
      if (!sol.winning[ki]) continue;
      if (std::none_of(kg.choices[ki].begin(), kg.choices[ki].end(), ok)) {
        sol.winning[ki] = false;
        changed = true;
      }
    }
  }
  sol.allowed.resize(n);
  for (std::size_t ki = 0; ki < n; ++ki) {
    if (!sol.winning[ki]) continue;
    for (const auto& c : kg.choices[ki]) {
      if (ok(c)) sol.allowed[ki].push_back(c.watch);
    }
    std::sort(sol.allowed[ki].begin(), sol.allowed[ki].end(), lex_less);
  }
  return sol;
}

}  // namespace dynobs
