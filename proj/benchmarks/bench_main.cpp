#include <benchmark/benchmark.h>

#include <random>

#include "dynobs/cost.hpp"
#include "dynobs/diagnosis.hpp"
#include "dynobs/mean_payoff.hpp"
#include "dynobs/synthesis.hpp"

using namespace dynobs;

namespace {

// s0 -f-> a^n -> b -> loop, and s0 -> a^n -> c -> loop: the fault shows
// only at the end, n+1 steps after it happened.
Plant twin_chains(unsigned n) {
  Alphabet ab({"a", "b", "c"});
  std::vector<std::string> names;
  std::vector<Transition> ts;
  auto add_state = [&](std::string name) {
    names.push_back(std::move(name));
    return static_cast<StateId>(names.size() - 1);
  };
  const StateId s0 = add_state("s0");
  auto branch = [&](const std::string& tag, Label first, unsigned last_event) {
    StateId at = s0;
    if (first.is_fault()) {
      const StateId next = add_state(tag + "f");
      ts.push_back({at, first, next});
      at = next;
    }
    for (unsigned i = 0; i < n; ++i) {
      const StateId next = add_state(tag + std::to_string(i));
      ts.push_back({at, Label::event(0), next});
      at = next;
    }
    const StateId end = add_state(tag + "end");
    ts.push_back({at, Label::event(last_event), end});
    ts.push_back({end, Label::epsilon(), end});
  };
  branch("x", Label::fault(), 1);
  branch("y", Label::epsilon(), 2);
  return Plant("chains", ab, names, s0, ts);
}

Plant plant_b() {
  Alphabet ab({"a", "b"});
  return Plant("B", ab, {"s0", "s1", "s2", "s3", "s4", "s5"}, 0,
               {{0, Label::fault(), 1},
                {0, Label::event(1), 4},
                {1, Label::event(0), 2},
                {2, Label::event(1), 3},
                {3, Label::epsilon(), 3},
                {4, Label::event(0), 5},
                {5, Label::epsilon(), 5}});
}

WeightedGraphGame random_game(unsigned half, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const unsigned n = 2 * half;
  std::vector<bool> p1(n);
  for (unsigned v = 0; v < n; ++v) p1[v] = v < half;
  std::vector<WeightedEdge> edges;
  for (unsigned v = 0; v < n; ++v) {
    // A ring through alternating sides keeps everything reachable.
    const unsigned ring = v < half ? half + v : (v - half + 1) % half;
    edges.push_back({v, ring, static_cast<std::int64_t>(rng() % 9) - 4});
    for (int extra = 0; extra < 2; ++extra) {
      const unsigned dst = v < half ? half + rng() % half : rng() % half;
      if (dst != ring) edges.push_back({v, dst, static_cast<std::int64_t>(rng() % 9) - 4});
    }
  }
  return WeightedGraphGame(p1, edges, 0);
}

WeightedAutomaton random_weighted(unsigned n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Alphabet ab({"a"});
  std::vector<std::string> names;
  std::vector<Transition> ts;
  std::vector<std::int64_t> weight;
  for (unsigned s = 0; s < n; ++s) {
    names.push_back("q" + std::to_string(s));
    weight.push_back(static_cast<std::int64_t>(rng() % 10));
    ts.push_back({s, Label::event(0), (s + 1) % n});
    ts.push_back({s, Label::event(0), static_cast<StateId>(rng() % n)});
  }
  return {Automaton("w", ab, names, 0, ts), weight};
}

void BM_CheckStaticChains(benchmark::State& state) {
  const Plant p = twin_chains(static_cast<unsigned>(state.range(0)));
  const auto k = static_cast<unsigned>(state.range(0)) + 1;
  for (auto _ : state) benchmark::DoNotOptimize(check_static(p, p.alphabet().all(), k));
}
BENCHMARK(BM_CheckStaticChains)->RangeMultiplier(4)->Range(4, 256);

void BM_MinKChains(benchmark::State& state) {
  const Plant p = twin_chains(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(min_k_static(p, p.alphabet().all()));
}
BENCHMARK(BM_MinKChains)->RangeMultiplier(4)->Range(4, 256);

void BM_SynthesizeChains(benchmark::State& state) {
  const Plant p = twin_chains(static_cast<unsigned>(state.range(0)));
  const auto k = static_cast<unsigned>(state.range(0)) + 1;
  for (auto _ : state) benchmark::DoNotOptimize(most_permissive_observer(p, k));
}
BENCHMARK(BM_SynthesizeChains)->DenseRange(2, 10, 4);

void BM_SynthesizeB(benchmark::State& state) {
  const Plant b = plant_b();
  for (auto _ : state) benchmark::DoNotOptimize(most_permissive_observer(b, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_SynthesizeB)->DenseRange(1, 4);

void BM_Karp(benchmark::State& state) {
  const auto wa = random_weighted(static_cast<unsigned>(state.range(0)), 17);
  for (auto _ : state) benchmark::DoNotOptimize(karp_max_mean(wa));
}
BENCHMARK(BM_Karp)->RangeMultiplier(4)->Range(8, 512);

void BM_ZeroPaterson(benchmark::State& state) {
  const auto g = random_game(static_cast<unsigned>(state.range(0)), 23);
  for (auto _ : state) benchmark::DoNotOptimize(zp_solve(g));
}
BENCHMARK(BM_ZeroPaterson)->RangeMultiplier(2)->Range(4, 32);

void BM_OptimalB(benchmark::State& state) {
  const Plant b = plant_b();
  for (auto _ : state) benchmark::DoNotOptimize(optimal_cost_observer(b, 2));
}
BENCHMARK(BM_OptimalB);

}  // namespace

BENCHMARK_MAIN();
