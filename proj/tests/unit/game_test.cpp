#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dynobs/diagnosis.hpp"
#include "dynobs/error.hpp"
#include "dynobs/game.hpp"
#include "fixtures.hpp"
#include "random_models.hpp"

namespace dynobs {
namespace {

using testing::plant_b;

TEST(GameArena, ShapeOnB) {
  const GameArena arena(plant_b(), 1);
  const auto& vs = arena.vertices();
  ASSERT_FALSE(vs.empty());
  EXPECT_EQ(vs[arena.initial()].triple, (Triple{0, -1, 0}));
  EXPECT_TRUE(vs[arena.initial()].player1);
  EXPECT_EQ(arena.num_player1() + arena.num_player2(), vs.size());
  bool some_bad = false;
  for (std::uint32_t v = 0; v < vs.size(); ++v) {
    EXPECT_EQ(vs[v].player1, v < arena.num_player1());
    some_bad |= arena.bad(v);
    const auto out = arena.out(v);
    if (vs[v].player1) {
      EXPECT_EQ(out.size(), 4u);
      for (const auto& e : out) {
        EXPECT_EQ(e.kind, MoveKind::kChoice);
        EXPECT_FALSE(vs[e.dst].player1);
        EXPECT_EQ(vs[e.dst].choice, e.choice);
        EXPECT_EQ(vs[e.dst].triple, vs[v].triple);
      }
    } else {
      for (const auto& e : out) {
        EXPECT_NE(e.kind, MoveKind::kChoice);
        // Silent moves keep Player 2 on the move under the same watch-set.
        EXPECT_EQ(vs[e.dst].player1, e.kind == MoveKind::kJoint);
        if (e.kind == MoveKind::kJoint) {
          EXPECT_TRUE(vs[v].choice.contains(e.label));
        } else {
          EXPECT_EQ(vs[e.dst].choice, vs[v].choice);
          EXPECT_FALSE(vs[v].choice.contains(e.label));
        }
        if (e.kind == MoveKind::kSilentRight) EXPECT_FALSE(e.label.is_fault());
      }
    }
  }
  EXPECT_TRUE(some_bad);
}

TEST(GameArena, CounterSaturatesAtK) {
  for (unsigned k : {0u, 1u, 2u}) {
    const GameArena arena(plant_b(), k);
    for (const auto& v : arena.vertices()) {
      EXPECT_GE(v.triple.j, -1);
      EXPECT_LE(v.triple.j, static_cast<int>(k));
    }
  }
}

TEST(GameArena, SilentAndJointMoves) {
  const GameArena arena(plant_b(), 2);
  const Triple start{0, -1, 0};
  const auto silent = arena.silent_moves(start, EventSet(0b01));
  // Left takes f or the unwatched b; right takes b.
  EXPECT_EQ(silent.size(), 3u);
  EXPECT_TRUE(std::any_of(silent.begin(), silent.end(), [](const auto& m) {
    return m.kind == MoveKind::kSilentLeft && m.target == Triple{4, -1, 0};
  }));
  EXPECT_TRUE(std::any_of(silent.begin(), silent.end(), [](const auto& m) {
    return m.kind == MoveKind::kSilentLeft && m.target == Triple{1, 0, 0};
  }));
  EXPECT_TRUE(std::any_of(silent.begin(), silent.end(), [](const auto& m) {
    return m.kind == MoveKind::kSilentRight && m.target == Triple{0, -1, 4};
  }));
  const auto joint = arena.joint_moves(Triple{1, 0, 4}, 0);
  ASSERT_EQ(joint.size(), 1u);
  EXPECT_EQ(joint.front(), (Triple{2, 1, 5}));
}

TEST(GameArena, RespectsCap) {
  EXPECT_THROW(build_game(plant_b(), 2, 3), ResourceError);
  const GameArena arena = build_game(plant_b(), 2);
  EXPECT_THROW(build_knowledge_game(arena, 2), ResourceError);
}

TEST(KnowledgeGame, BIsLosingAtZeroAndWinningAtOne) {
  const Plant b = plant_b();
  {
    const auto kg = build_knowledge_game(GameArena(b, 0));
    EXPECT_FALSE(solve_safety(kg).winning[kg.initial]);
  }
  const auto kg = build_knowledge_game(GameArena(b, 1));
  const auto sol = solve_safety(kg);
  ASSERT_TRUE(sol.winning[kg.initial]);
  const auto& allowed = sol.allowed[kg.initial];
  EXPECT_TRUE(std::is_sorted(allowed.begin(), allowed.end(), lex_less));
  EXPECT_NE(std::find(allowed.begin(), allowed.end(), b.alphabet().all()), allowed.end());
  // Watching nothing lets f·a·b and b·a blend forever.
  EXPECT_TRUE(kg.choices[kg.initial][0].losing ||
              std::find(allowed.begin(), allowed.end(), EventSet()) == allowed.end());
}

TEST(KnowledgeGame, StructuralInvariants) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 60; ++i) {
    const Plant p = testing::random_plant(rng);
    for (unsigned k = 0; k <= 2; ++k) {
      const auto kg = build_knowledge_game(GameArena(p, k));
      const auto sol = solve_safety(kg);
      const std::size_t family = std::size_t{1} << p.alphabet().size();
      for (std::size_t s = 0; s < kg.knowledge.size(); ++s) {
        EXPECT_FALSE(kg.knowledge[s].empty());
        EXPECT_TRUE(std::is_sorted(kg.knowledge[s].begin(), kg.knowledge[s].end()));
        ASSERT_EQ(kg.choices[s].size(), family);
        if (!sol.winning[s]) EXPECT_TRUE(sol.allowed[s].empty());
        if (sol.winning[s]) EXPECT_FALSE(sol.allowed[s].empty());
        for (EventSet x : sol.allowed[s]) {
          const auto& c = kg.choices[s][x.mask()];
          EXPECT_FALSE(c.losing);
          for (auto [e, t] : c.successors) {
            EXPECT_TRUE(x.contains(e));
            EXPECT_TRUE(sol.winning[t]);
          }
        }
      }
    }
  }
}

TEST(KnowledgeGame, WinningIsMonotoneAndAdmitsFullObservation) {
  std::mt19937_64 rng(78);
  for (int i = 0; i < 80; ++i) {
    const Plant p = testing::random_plant(rng);
    bool previous = false;
    for (unsigned k = 0; k <= 3; ++k) {
      const auto kg = build_knowledge_game(GameArena(p, k));
      const auto sol = solve_safety(kg);
      const bool win = sol.winning[kg.initial];
      EXPECT_TRUE(!previous || win);
      previous = win;
      if (check_static(p, p.alphabet().all(), k).diagnosable) {
        ASSERT_TRUE(win);
        const auto& allowed = sol.allowed[kg.initial];
        EXPECT_NE(std::find(allowed.begin(), allowed.end(), p.alphabet().all()), allowed.end());
      }
    }
  }
}

}  // namespace
}  // namespace dynobs
