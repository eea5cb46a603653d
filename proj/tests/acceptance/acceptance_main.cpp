// Acceptance checks: one PASS/FAIL line per criterion.
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "dynobs/cost.hpp"
#include "dynobs/diagnosis.hpp"
#include "dynobs/error.hpp"
#include "dynobs/io.hpp"
#include "dynobs/mean_payoff.hpp"
#include "dynobs/product.hpp"
#include "dynobs/synthesis.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_models.hpp"

using namespace dynobs;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string str(const Rational& r) { return r.str(); }

std::string opt_str(const std::optional<unsigned>& v) { return v ? std::to_string(*v) : "none"; }

void transducer_goldens() {
  const Observer obs = testing::observer_a_then_b();
  const Alphabet& a = obs.alphabet();
  const std::pair<const char*, const char*> cases[] = {
      {"baab", "ab"}, {"bababbaab", "ab"}, {"bbbbba", "a"}, {"bbaaa", "a"}};
  int ok = 0;
  std::string detail;
  for (auto [in, expected] : cases) {
    const std::string got = testing::letters_of(a, observe_word(obs, testing::word_of(a, in)));
    ok += got == expected;
    detail += std::string(in) + "->" + got + " ";
  }
  report(1, "transducer goldens", ok == 4, detail);
}

void masked_product_golden() {
  const MaskedProduct mp = masked_product(testing::plant_b(), testing::observer_a_then_b());
  const bool iso = testing::isomorphic(mp.automaton, testing::expected_masked_b());
  report(2, "masked product golden", iso,
         std::to_string(mp.automaton.num_states()) + " states, " +
             std::to_string(mp.automaton.transitions().size()) + " transitions");
}

void diagnosability_oracle() {
  std::mt19937_64 rng(20231);
  int checks = 0, disagreements = 0, positives = 0;
  for (int i = 0; i < 500; ++i) {
    const Plant p = testing::random_plant(rng);
    const Observer o = testing::random_observer(rng, p.alphabet());
    for (unsigned k = 0; k <= 3; ++k) {
      const bool got = check_dynamic(p, o, k).diagnosable;
      const bool expected = testing::oracle_diagnosable(p, o, k);
      const bool bounded_violation = testing::oracle_bounded_violation(p, o, k, 6);
      if (got != expected || (got && bounded_violation)) ++disagreements;
      positives += got;
      ++checks;
    }
  }
  report(3, "diagnosability oracle equivalence", disagreements == 0,
         std::to_string(checks) + " checks (" + std::to_string(positives) + " diagnosable), " +
             std::to_string(disagreements) + " disagreements");
}

void plant_b_delays() {
  const Plant b = testing::plant_b();
  const auto d = min_k_dynamic(b, testing::observer_a_then_b());
  const auto ab = min_k_static(b, b.alphabet().all());
  const auto a = min_k_static(b, b.alphabet().set_of({"a"}));
  const auto bb = min_k_static(b, b.alphabet().set_of({"b"}));
  const bool ok = d == 2u && ab == 1u && !a && !bb;
  report(4, "plant B delays", ok,
         "dynamic a-then-b=" + opt_str(d) + " static{a,b}=" + opt_str(ab) + " static{a}=" + opt_str(a) +
             " static{b}=" + opt_str(bb));
}

void synthesis_suites() {
  std::mt19937_64 rng(4242);
  std::vector<Selector> selectors{select_lex_least, select_smallest, select_largest};
  for (std::uint64_t s = 0; s < 50; ++s) selectors.push_back(select_random(s));
  int instances = 0, extracted = 0, unsound = 0;
  int observers = 0, mismatches = 0;
  int trivial_cases = 0, trivial_violations = 0;
  while (instances < 200 || observers < 500) {
    const Plant p = testing::random_plant(rng);
    const unsigned k = static_cast<unsigned>(rng() % 4);
    const auto mpo = most_permissive_observer(p, k);
    const bool full = check_static(p, p.alphabet().all(), k).diagnosable;
    if (full) {
      ++trivial_cases;
      if (!mpo || !mpo->find_allowed(mpo->initial, p.alphabet().all())) ++trivial_violations;
    } else if (mpo) {
      ++trivial_violations;
    }
    if (!mpo) continue;
    ++instances;
    for (const auto& sel : selectors) {
      const Observer o = extract_observer(*mpo, sel);
      ++extracted;
      if (!validate_observer(o.to_draft()).valid() || !check_dynamic(p, o, k).diagnosable) ++unsound;
    }
    for (int j = 0; j < 3; ++j) {
      const Observer o = testing::random_observer(rng, p.alphabet());
      ++observers;
      if (mpo_membership(*mpo, o).member != check_dynamic(p, o, k).diagnosable) ++mismatches;
    }
  }
  report(5, "extraction soundness and membership exactness", unsound == 0 && mismatches == 0,
         std::to_string(instances) + " instances, " + std::to_string(extracted) + " extracted observers (" +
             std::to_string(unsound) + " unsound), " + std::to_string(observers) + " membership checks (" +
             std::to_string(mismatches) + " mismatches)");
  report(6, "trivial observer admission", trivial_violations == 0,
         std::to_string(trivial_cases) + " statically diagnosable cases, " + std::to_string(trivial_violations) +
             " violations");
}

void karp_oracle() {
  std::mt19937_64 rng(777);
  int disagreements = 0;
  for (int i = 0; i < 500; ++i) {
    const auto g = testing::random_weighted(rng);
    const auto expected = testing::oracle_max_cycle_mean(g.automaton, g.weight);
    if (!expected || karp_max_mean({g.automaton, g.weight}).value != *expected) ++disagreements;
  }
  report(7, "Karp oracle equivalence", disagreements == 0,
         "500 automata, " + std::to_string(disagreements) + " disagreements");
}

void cost_convergence() {
  const Plant b = testing::plant_b();
  const Rational full = observer_cost(b, static_observer(b.alphabet(), b.alphabet().all()));
  const Rational a_then_b = observer_cost(b, testing::observer_a_then_b());
  const bool goldens = full == Rational(2) && a_then_b == Rational(1);

  std::mt19937_64 rng(8080);
  const unsigned n = 64;
  int pairs = 0, outside = 0, outside_provable = 0;
  Rational worst(0);
  for (int i = 0; i < 500; ++i) {
    const Plant p = testing::random_plant(rng);
    const Observer o = testing::random_observer(rng, p.alphabet());
    Rational gap = testing::oracle_max_run_cost(p, o, n) - observer_cost(p, o);
    if (gap < Rational(0)) gap = -gap;
    const std::int64_t w = p.alphabet().size();
    const auto z = static_cast<std::int64_t>(cost_product(p, o).automaton.num_states());
    if (gap > Rational(2 * w, n)) ++outside;
    if (gap > Rational(z * w, n + 1)) ++outside_provable;
    const Rational scaled = gap * Rational(n) / Rational(w);
    if (scaled > worst) worst = scaled;
    ++pairs;
  }
  report(8, "cost convergence", goldens && outside == 0,
         "cost(static{a,b})=" + str(full) + " cost(a-then-b)=" + str(a_then_b) + "; n=64: " + std::to_string(outside) +
             "/" + std::to_string(pairs) + " pairs outside 2|Σ|/n (worst gap*n/|Σ| = " + str(worst) + "), " +
             std::to_string(outside_provable) + " outside |Z|*W/(n+1)");
}

void mean_payoff_oracle() {
  std::mt19937_64 rng(9090);
  int disagreements = 0;
  for (int i = 0; i < 300; ++i) {
    const auto g = testing::random_game(rng);
    if (zp_value(g)[g.source()] != testing::oracle_game_value(g)) ++disagreements;
  }
  report(9, "mean-payoff oracle", disagreements == 0,
         "300 games, " + std::to_string(disagreements) + " disagreements");
}

void optimal_golden() {
  const Plant b = testing::plant_b();
  const auto opt = optimal_cost_observer(b, 2);
  const bool bounded_half = bounded_cost_observer(b, 2, Rational(1, 2)).has_value();
  if (!opt) {
    report(10, "optimal synthesis golden", false, "no observer returned");
    return;
  }
  const bool valid = check_dynamic(b, opt->observer, 2).diagnosable;
  const Rational oc = observer_cost(b, opt->observer);
  const bool ok = opt->cost == Rational(1) && valid && oc == Rational(1) && !bounded_half;
  report(10, "optimal synthesis golden", ok,
         "cost=" + str(opt->cost) + " witness valid=" + (valid ? "yes" : "no") + " witness cost=" + str(oc) +
             " initial watch=" + b.alphabet().format(opt->observer.watch(opt->observer.initial())) +
             " bounded(1/2)=" + (bounded_half ? "present" : "absent") + " (expected cost 1, bounded(1/2) absent)");
}

std::string run_cli(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  const int c = cli::run_command(args, out, err);
  if (code) *code = c;
  return out.str();
}

void cli_round_trip(const std::string& models) {
  int files = 0, identical = 0;
  for (const auto& entry : std::filesystem::directory_iterator(models)) {
    ++files;
    const std::string text = read_text_file(entry.path().string());
    try {
      identical += serialize(parse_model(text)) == text;
    } catch (const InputError&) {
    }
  }

  const auto tmp = std::filesystem::temp_directory_path() / "dynobs_acceptance";
  std::filesystem::create_directories(tmp);
  const std::string plant = models + "/B.plant";
  int generated = 0, generated_identical = 0;
  for (const auto& [cmd, file] : {std::pair{"synthesize", "b.mpo"}, std::pair{"extract", "b.obs"}}) {
    const std::string path = (tmp / file).string();
    int code = 0;
    run_cli({"--seed", "3", cmd, "--plant", plant, "--k", "2", "--out", path}, &code);
    ++generated;
    if (code != 0) continue;
    const std::string text = read_text_file(path);
    generated_identical += serialize(parse_model(text)) == text;
  }
  std::filesystem::remove_all(tmp);

  const std::vector<std::vector<std::string>> commands{
      {"--seed", "11", "extract", "--plant", plant, "--k", "2", "--selector", "random"},
      {"synthesize", "--plant", plant, "--k", "2"},
      {"optimal", "--plant", plant, "--k", "2"},
      {"diagnose", "--plant", plant, "--obs", models + "/a-then-b.obs", "--k", "1"},
      {"cost", "--plant", plant, "--obs", models + "/a-then-b.obs"},
      {"export-dot", "--in", plant, "--obs", models + "/a-then-b.obs"},
  };
  int repeated = 0, stable = 0;
  for (const auto& args : commands) {
    const std::string first = run_cli(args);
    bool same = true;
    for (int i = 0; i < 3; ++i) same = same && run_cli(args) == first;
    ++repeated;
    stable += same;
  }
  const bool ok = identical == files && generated_identical == generated && stable == repeated;
  report(11, "CLI round-trip and determinism", ok,
         std::to_string(identical) + "/" + std::to_string(files) + " shipped models, " +
             std::to_string(generated_identical) + "/" + std::to_string(generated) + " generated models, " +
             std::to_string(stable) + "/" + std::to_string(repeated) + " commands byte-identical on repeat");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string models = argc > 1 ? argv[1] : "models";
  transducer_goldens();
  masked_product_golden();
  diagnosability_oracle();
  plant_b_delays();
  synthesis_suites();
  karp_oracle();
  cost_convergence();
  mean_payoff_oracle();
  optimal_golden();
  cli_round_trip(models);
  return failures == 0 ? 0 : 1;
}
