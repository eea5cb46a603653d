#include <gtest/gtest.h>

#include <random>

#include "dynobs/diagnosis.hpp"
#include "dynobs/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_models.hpp"

namespace dynobs {
namespace {

using testing::letters_of;
using testing::observer_a_then_b;
using testing::plant_b;

EventSet set_of(const Plant& p, std::vector<std::string> names) { return p.alphabet().set_of(names); }

// Both members replay, have the right fault status and share observations.
void expect_valid_counterexample(const Plant& raw, const Observer& obs, const Verdict& v) {
  ASSERT_TRUE(v.counterexample.has_value());
  const Plant plant = epsilon_complete(raw);
  const auto& cx = *v.counterexample;
  ASSERT_TRUE(plant.accepts_lasso(cx.faulty));
  ASSERT_TRUE(plant.accepts_lasso(cx.non_faulty));
  EXPECT_FALSE(is_faulty(cx.non_faulty.unroll(3)));
  if (cx.faulty.finite()) {
    EXPECT_TRUE(classify_k_faulty(cx.faulty.stem, v.k));
    EXPECT_TRUE(cx.non_faulty.finite());
    EXPECT_EQ(observe_run(plant, obs, cx.faulty.stem), observe_run(plant, obs, cx.non_faulty.stem));
  } else {
    for (std::size_t m : {1u, 4u, 9u}) {
      EXPECT_TRUE(classify_k_faulty(cx.faulty.unroll(m), static_cast<unsigned>(m) - 1));
      EXPECT_EQ(observe_run(plant, obs, cx.faulty.unroll(m)), observe_run(plant, obs, cx.non_faulty.unroll(m)));
    }
  }
}

TEST(CheckStatic, FullObservationOfB) {
  const Plant b = plant_b();
  EXPECT_TRUE(check_static(b, b.alphabet().all(), 1).diagnosable);
  const Verdict v0 = check_static(b, b.alphabet().all(), 0);
  EXPECT_FALSE(v0.diagnosable);
  EXPECT_EQ(v0.min_k, 1u);
}

TEST(CheckStatic, WatchingOnlyAIsRefutedByALasso) {
  const Plant b = plant_b();
  const Observer only_a = static_observer(b.alphabet(), set_of(b, {"a"}));
  for (unsigned k : {0u, 1u, 2u, 5u}) {
    const Verdict v = check_static(b, set_of(b, {"a"}), k);
    EXPECT_FALSE(v.diagnosable);
    EXPECT_FALSE(v.min_k.has_value());
    expect_valid_counterexample(b, only_a, v);
    const auto& cx = *v.counterexample;
    EXPECT_FALSE(cx.faulty.finite());
    EXPECT_EQ(letters_of(b.alphabet(), observe_run(b, only_a, cx.faulty.unroll(2))), "a");
  }
}

TEST(CheckStatic, FaultFreePlant) {
  Alphabet ab({"a"});
  Plant p("clean", ab, {"p", "q"}, 0, {{0, Label::event(0), 1}, {1, Label::epsilon(), 0}});
  const Verdict v = check_static(p, EventSet(), 0);
  EXPECT_TRUE(v.diagnosable);
  EXPECT_EQ(v.min_k, 0u);
  EXPECT_FALSE(v.counterexample.has_value());
}

TEST(CheckStatic, RejectsForeignWatchSet) {
  EXPECT_THROW(check_static(plant_b(), EventSet(4), 1), InputError);
}

TEST(CheckStatic, ReportsEpsilonCompletion) {
  Alphabet ab({"a"});
  Plant p("dead", ab, {"p", "q"}, 0, {{0, Label::fault(), 1}});
  const Verdict v = check_static(p, ab.all(), 1);
  EXPECT_TRUE(v.epsilon_completed);
  EXPECT_FALSE(v.diagnosable);
  EXPECT_FALSE(check_static(plant_b(), EventSet(3), 1).epsilon_completed);
}

TEST(CheckDynamic, AThenBObserver) {
  const Plant b = plant_b();
  const Observer obs = observer_a_then_b();
  EXPECT_TRUE(check_dynamic(b, obs, 2).diagnosable);
  const Verdict v1 = check_dynamic(b, obs, 1);
  EXPECT_FALSE(v1.diagnosable);
  expect_valid_counterexample(b, obs, v1);
  const auto& cx = *v1.counterexample;
  EXPECT_EQ(letters_of(b.alphabet(), observe_run(b, obs, cx.faulty.stem)), "a");
  EXPECT_EQ(cx.faulty.stem.steps.size(), 2u);
  EXPECT_EQ(cx.non_faulty.stem.steps.front().label, Label::event(1));
}

TEST(CheckDynamic, BlindObserverNeverDiagnoses) {
  const Plant b = plant_b();
  for (unsigned k : {0u, 1u, 3u}) {
    EXPECT_FALSE(check_dynamic(b, static_observer(b.alphabet(), EventSet()), k).diagnosable);
  }
}

TEST(MinK, PlantB) {
  const Plant b = plant_b();
  EXPECT_EQ(min_k_dynamic(b, observer_a_then_b()), 2u);
  EXPECT_EQ(min_k_static(b, b.alphabet().all()), 1u);
  EXPECT_EQ(min_k_dynamic(b, static_observer(b.alphabet(), b.alphabet().all())), 1u);
  EXPECT_FALSE(min_k_static(b, set_of(b, {"a"})).has_value());
  EXPECT_FALSE(min_k_static(b, set_of(b, {"b"})).has_value());
  EXPECT_FALSE(min_k_dynamic(b, static_observer(b.alphabet(), set_of(b, {"a"}))).has_value());
}

class RandomDiagnosis : public ::testing::TestWithParam<int> {};

TEST_P(RandomDiagnosis, AgreesWithOracles) {
  std::mt19937_64 rng(1000 + GetParam());
  for (int i = 0; i < 60; ++i) {
    const Plant p = testing::random_plant(rng);
    const Observer o = testing::random_observer(rng, p.alphabet());
    for (unsigned k = 0; k <= 3; ++k) {
      const Verdict v = check_dynamic(p, o, k);
      ASSERT_EQ(v.diagnosable, testing::oracle_diagnosable(p, o, k)) << "k=" << k;
      if (testing::oracle_bounded_violation(p, o, k, 6)) EXPECT_FALSE(v.diagnosable);
      if (!v.diagnosable) expect_valid_counterexample(p, o, v);
      if (v.min_k) {
        EXPECT_EQ(v.diagnosable, k >= *v.min_k);
      } else {
        EXPECT_FALSE(v.diagnosable);
      }
    }
  }
}

TEST_P(RandomDiagnosis, StaticMatchesDynamicAndIsMonotone) {
  std::mt19937_64 rng(2000 + GetParam());
  for (int i = 0; i < 40; ++i) {
    const Plant p = testing::random_plant(rng);
    const unsigned n = p.alphabet().size();
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      const EventSet sub(m);
      bool previous = false;
      for (unsigned k = 0; k <= 3; ++k) {
        const Verdict s = check_static(p, sub, k);
        EXPECT_EQ(s.diagnosable, check_dynamic(p, static_observer(p.alphabet(), sub), k).diagnosable);
        EXPECT_TRUE(!previous || s.diagnosable) << "monotone in k";
        previous = s.diagnosable;
        if (s.diagnosable) {
          for (std::uint32_t sup = m; sup < (1u << n); sup = (sup + 1) | m) {
            EXPECT_TRUE(check_static(p, EventSet(sup), k).diagnosable) << "monotone in watch-set";
          }
        }
      }
    }
  }
}

TEST_P(RandomDiagnosis, MinKIsTight) {
  std::mt19937_64 rng(3000 + GetParam());
  for (int i = 0; i < 40; ++i) {
    const Plant p = testing::random_plant(rng);
    const Observer o = testing::random_observer(rng, p.alphabet(), 3);
    const auto m = min_k_dynamic(p, o);
    if (m) {
      EXPECT_TRUE(testing::oracle_diagnosable(p, o, *m));
      if (*m > 0) EXPECT_FALSE(testing::oracle_diagnosable(p, o, *m - 1));
    } else {
      const unsigned bound = static_cast<unsigned>(p.num_states() * o.num_states()) + 2;
      EXPECT_FALSE(testing::oracle_diagnosable(p, o, bound));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomDiagnosis, ::testing::Range(0, 4));

}  // namespace
}  // namespace dynobs
