#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "dynobs/cost.hpp"
#include "dynobs/diagnosis.hpp"
#include "dynobs/error.hpp"
#include "dynobs/io.hpp"
#include "dynobs/product.hpp"
#include "dynobs/synthesis.hpp"

namespace dynobs::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

Json rational(const Rational& r) { return Json{{"num", r.num()}, {"den", r.den()}}; }

Json word(const Alphabet& a, const Word& w) {
  Json out = Json::array();
  for (Label l : w) out.push_back(a.label_name(l));
  return out;
}

Json steps(const Automaton& a, const std::vector<Step>& ss) {
  Json out = Json::array();
  for (const auto& s : ss) out.push_back({{"label", a.alphabet().label_name(s.label)}, {"target", a.state_name(s.target)}});
  return out;
}

Json lasso(const Automaton& a, const Lasso& l) {
  return {{"start", a.state_name(l.stem.start)}, {"stem", steps(a, l.stem.steps)}, {"cycle", steps(a, l.cycle)}};
}

Json history(const Alphabet& a, const AnnotatedHistory& h) {
  Json watches = Json::array();
  for (auto x : h.watches) watches.push_back(a.format(x));
  return {{"watches", watches}, {"events", word(a, h.events)}, {"text", format_history(h, a)}};
}

struct Options {
  std::string plant, obs, observe, out_file, selector = "smallest", budget;
  std::vector<std::string> inputs;
  std::optional<unsigned> k;
  std::uint64_t seed = 0;
  std::optional<std::size_t> cap;
};

std::size_t resolve_cap(const Options& o) {
  if (o.cap) return *o.cap;
  if (const char* env = std::getenv("DYNOBS_CAP")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (...) {
      throw InputError("DYNOBS_CAP is not a number");
    }
  }
  return kDefaultStateCap;
}

Plant load_plant(const std::string& path) {
  auto doc = read_model_file(path);
  if (doc.kind != ModelKind::kPlant) throw InputError(path + ": expected a plant model");
  return std::get<Plant>(doc.body);
}

Observer load_observer(const std::string& path) {
  auto doc = read_model_file(path);
  if (doc.kind != ModelKind::kObserver) throw InputError(path + ": expected an observer model");
  return std::get<Observer>(doc.body);
}

unsigned require_k(const Options& o) {
  if (!o.k) throw InputError("--k is required");
  return *o.k;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw InputError("cannot write '" + path + "'");
}

// Each command fills `result` and `stats` and returns its exit code.
using Handler = int (*)(const Options&, Json& result, Json& stats, std::ostream& raw);

Json verdict_json(const Plant& plant, const Verdict& v, const std::optional<Observer>& obs, bool explicit_k) {
  Json r;
  if (explicit_k) {
    r["k"] = v.k;
    r["diagnosable"] = v.diagnosable;
  }
  r["min_k"] = v.min_k ? Json(*v.min_k) : Json(nullptr);
  r["epsilon_completed"] = v.epsilon_completed;
  const Automaton completed = epsilon_complete(plant);
  if (v.counterexample) {
    const auto& cx = *v.counterexample;
    Json c;
    c["faulty"] = lasso(completed, cx.faulty);
    c["non_faulty"] = lasso(completed, cx.non_faulty);
    const Observer o = obs ? *obs : static_observer(plant.alphabet(), plant.alphabet().all());
    c["observation"] = word(plant.alphabet(), observe_run(completed, o, cx.faulty.unroll(1)));
    r["counterexample"] = c;
  } else {
    r["counterexample"] = nullptr;
  }
  return r;
}

int cmd_validate(const Options& o, Json& result, Json&, std::ostream&) {
  if (o.inputs.empty()) throw InputError("--in is required");
  bool all = true;
  Json files = Json::array();
  for (const auto& path : o.inputs) {
    Json f{{"file", path}};
    const std::string text = read_text_file(path);
    Json errors = Json::array();
    try {
      auto doc = parse_model(text);
      f["kind"] = kind_name(doc.kind);
    } catch (const InputError& e) {
      // Observers are re-read as drafts so that every violation is listed.
      try {
        auto draft = parse_observer_draft(text);
        f["kind"] = "observer";
        for (const auto& v : validate_observer(draft).violations) errors.push_back(v.message);
      } catch (const InputError&) {
        f["kind"] = nullptr;
      }
      if (errors.empty()) errors.push_back(e.what());
    }
    f["valid"] = errors.empty();
    f["errors"] = errors;
    all = all && errors.empty();
    files.push_back(f);
  }
  result["valid"] = all;
  result["files"] = files;
  return all ? kOk : kNegative;
}

EventSet parse_observe_list(const Alphabet& a, const std::string& list) {
  std::vector<std::string> names;
  std::istringstream in(list);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) names.push_back(item);
  }
  return a.set_of(names);
}

int cmd_diagnose_static(const Options& o, Json& result, Json& stats, std::ostream&) {
  const Plant plant = load_plant(o.plant);
  const EventSet sub = parse_observe_list(plant.alphabet(), o.observe);
  const Verdict v = check_static(plant, sub, o.k.value_or(0));
  result["observe"] = plant.alphabet().format(sub);
  result.update(verdict_json(plant, v, static_observer(plant.alphabet(), sub), o.k.has_value()));
  stats["twin_states"] = v.twin_states;
  return (o.k ? v.diagnosable : v.min_k.has_value()) ? kOk : kNegative;
}

int cmd_diagnose(const Options& o, Json& result, Json& stats, std::ostream&) {
  const Plant plant = load_plant(o.plant);
  const Observer obs = load_observer(o.obs);
  const Verdict v = check_dynamic(plant, obs, o.k.value_or(0));
  result["observer"] = obs.name();
  result.update(verdict_json(plant, v, obs, o.k.has_value()));
  stats["twin_states"] = v.twin_states;
  return (o.k ? v.diagnosable : v.min_k.has_value()) ? kOk : kNegative;
}

Json synthesis_stats(const SynthesisStats& s) {
  return {{"arena_vertices", s.arena_vertices},
          {"knowledge_states", s.knowledge_states},
          {"winning_states", s.winning_states}};
}

int cmd_synthesize(const Options& o, Json& result, Json& stats, std::ostream&) {
  const Plant plant = load_plant(o.plant);
  SynthesisStats st;
  auto mpo = most_permissive_observer(plant, require_k(o), resolve_cap(o), &st);
  stats = synthesis_stats(st);
  result["k"] = *o.k;
  result["exists"] = mpo.has_value();
  if (!mpo) return kNegative;
  Json allowed = Json::array();
  for (auto x : mpo->evens[mpo->initial].allowed) allowed.push_back(mpo->alphabet.format(x));
  result["initial_allowed"] = allowed;
  result["even_nodes"] = mpo->evens.size();
  result["odd_nodes"] = mpo->odds.size();
  const std::string text = serialize(*mpo);
  if (!o.out_file.empty()) {
    write_file(o.out_file, text);
    result["written"] = o.out_file;
  } else {
    result["mpo"] = text;
  }
  return kOk;
}

int cmd_membership(const Options& o, Json& result, Json& stats, std::ostream&) {
  const Plant plant = load_plant(o.plant);
  const Observer obs = load_observer(o.obs);
  SynthesisStats st;
  auto mpo = most_permissive_observer(plant, require_k(o), resolve_cap(o), &st);
  stats = synthesis_stats(st);
  result["k"] = *o.k;
  result["observer"] = obs.name();
  if (!mpo) {
    result["member"] = false;
    result["reason"] = "no observer exists for this delay";
    return kNegative;
  }
  auto m = mpo_membership(*mpo, obs);
  result["member"] = m.member;
  result["violation"] = m.violation ? history(plant.alphabet(), *m.violation) : Json(nullptr);
  return m.member ? kOk : kNegative;
}

int cmd_extract(const Options& o, Json& result, Json& stats, std::ostream&) {
  const Plant plant = load_plant(o.plant);
  const Selector sel = selector_by_name(o.selector, o.seed);
  SynthesisStats st;
  auto mpo = most_permissive_observer(plant, require_k(o), resolve_cap(o), &st);
  stats = synthesis_stats(st);
  result["k"] = *o.k;
  result["selector"] = o.selector;
  result["exists"] = mpo.has_value();
  if (!mpo) return kNegative;
  const Observer obs = extract_observer(*mpo, sel, plant.name() + "-" + o.selector);
  const std::string text = serialize(obs);
  if (!o.out_file.empty()) {
    write_file(o.out_file, text);
    result["written"] = o.out_file;
  } else {
    result["observer"] = text;
  }
  return kOk;
}

int cmd_cost(const Options& o, Json& result, Json& stats, std::ostream&) {
  const Plant plant = load_plant(o.plant);
  const Observer obs = load_observer(o.obs);
  const WeightedAutomaton wa = cost_product(plant, obs);
  const MeanCycle mc = karp_max_mean(wa);
  result["observer"] = obs.name();
  result["cost"] = rational(mc.value);
  result["witness"] = lasso(wa.automaton, mc.witness);
  stats["product_states"] = wa.automaton.num_states();
  return kOk;
}

int cmd_optimal(const Options& o, Json& result, Json& stats, std::ostream&) {
  const Plant plant = load_plant(o.plant);
  std::optional<Rational> budget;
  if (!o.budget.empty()) {
    budget = Rational::parse(o.budget);
    if (*budget < Rational(0)) throw InputError("--budget must be non-negative");
  }
  auto opt = optimal_cost_observer(plant, require_k(o), watch_size, resolve_cap(o));
  result["k"] = *o.k;
  result["exists"] = opt.has_value();
  if (budget) result["budget"] = rational(*budget);
  if (!opt) return kNegative;
  result["cost"] = rational(opt->cost);
  result["observer_cost"] = rational(opt->observer_cost);
  result["tight"] = opt->tight;
  stats["game_vertices"] = opt->game_vertices;
  stats["value_iterations"] = opt->iterations;
  if (budget) {
    const bool within = opt->observer_cost <= *budget;
    result["within_budget"] = within;
    if (!within) return kNegative;
  }
  result["observer"] = serialize(opt->observer);
  return kOk;
}

int cmd_export_dot(const Options& o, Json&, Json&, std::ostream& raw) {
  if (o.inputs.size() != 1) throw InputError("export-dot takes exactly one --in file");
  auto doc = read_model_file(o.inputs[0]);
  if (!o.obs.empty()) {
    if (doc.kind != ModelKind::kPlant) throw InputError("--obs requires a plant model");
    raw << export_dot(masked_product(epsilon_complete(std::get<Plant>(doc.body)), load_observer(o.obs)).automaton);
  } else {
    raw << export_dot(doc);
  }
  return kOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fault diagnosis with dynamic observers", "dynobs"};
  app.require_subcommand(1);
  Options o;
  std::string cap_text;
  app.add_option("--seed", o.seed, "Seed for randomised selectors");
  app.add_option("--cap", cap_text, "Resource cap on constructed states");

  struct Entry {
    CLI::App* sub;
    Handler handler;
  };
  std::vector<Entry> entries;
  auto add = [&](const char* name, const char* help, Handler h) {
    auto* sub = app.add_subcommand(name, help);
    entries.push_back({sub, h});
    return sub;
  };
  auto plant_opt = [&](CLI::App* s) { s->add_option("--plant", o.plant, "Plant model")->required(); };
  auto obs_opt = [&](CLI::App* s) { s->add_option("--obs", o.obs, "Observer model")->required(); };
  auto k_opt = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--k", o.k, "Detection delay");
    if (required) opt->required();
  };

  auto* v = add("validate", "Check model files", cmd_validate);
  v->add_option("--in", o.inputs, "Model files")->required();
  auto* ds = add("diagnose-static", "Diagnosability with a fixed watch-set", cmd_diagnose_static);
  plant_opt(ds);
  ds->add_option("--observe", o.observe, "Comma-separated watched events")->required();
  k_opt(ds, false);
  auto* d = add("diagnose", "Diagnosability with a dynamic observer", cmd_diagnose);
  plant_opt(d);
  obs_opt(d);
  k_opt(d, false);
  auto* sy = add("synthesize", "Most permissive observer", cmd_synthesize);
  plant_opt(sy);
  k_opt(sy, true);
  sy->add_option("--out", o.out_file, "Write the mpo here");
  auto* m = add("membership", "Check an observer against the mpo", cmd_membership);
  plant_opt(m);
  k_opt(m, true);
  obs_opt(m);
  auto* ex = add("extract", "Extract an observer from the mpo", cmd_extract);
  plant_opt(ex);
  k_opt(ex, true);
  ex->add_option("--selector", o.selector, "lex, smallest, largest or random");
  ex->add_option("--out", o.out_file, "Write the observer here");
  auto* c = add("cost", "Long-run average watch cost", cmd_cost);
  plant_opt(c);
  obs_opt(c);
  auto* op = add("optimal", "Cheapest valid observer", cmd_optimal);
  plant_opt(op);
  k_opt(op, true);
  op->add_option("--budget", o.budget, "Cost budget as a fraction p/q");
  auto* dot = add("export-dot", "Render a model as Graphviz", cmd_export_dot);
  dot->add_option("--in", o.inputs, "Model file")->required();
  dot->add_option("--obs", o.obs, "Render the masked product with this observer");

  Json command = Json::array();
  for (const auto& a : args) command.push_back(a);
  auto emit = [&](Json doc) { out << doc.dump(2) << "\n"; };
  auto error_doc = [&](const char* kind, const std::string& msg, int code) {
    emit({{"schema", "dynobs.result"},
          {"schema_version", kSchemaVersion},
          {"command", command},
          {"exit_code", code},
          {"error", {{"kind", kind}, {"message", msg}}}});
    err << "dynobs: " << msg << "\n";
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return error_doc("usage", e.what(), kInputError);
  }

  for (const auto& e : entries) {
    if (!e.sub->parsed()) continue;
    try {
      if (!cap_text.empty()) {
        if (!std::all_of(cap_text.begin(), cap_text.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
          throw InputError("--cap must be a non-negative integer");
        }
        o.cap = static_cast<std::size_t>(std::stoull(cap_text));
      }
      Json result = Json::object();
      Json stats = Json::object();
      const int code = e.handler(o, result, stats, out);
      if (e.sub->get_name() == "export-dot") return code;
      emit({{"schema", "dynobs.result"},
            {"schema_version", kSchemaVersion},
            {"command", command},
            {"exit_code", code},
            {"result", result},
            {"stats", stats}});
      return code;
    } catch (const InputError& ex) {
      return error_doc("input", ex.what(), kInputError);
    } catch (const ResourceError& ex) {
      return error_doc("resource", ex.what(), kResourceError);
    } catch (const PreconditionError& ex) {
      return error_doc("input", ex.what(), kInputError);
    }
  }
  return kInputError;
}

}  // namespace dynobs::cli
