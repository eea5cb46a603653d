#include "dynobs/observer.hpp"

#include <algorithm>
#include <map>

#include "dynobs/error.hpp"

namespace dynobs {

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate_observer(const ObserverDraft& d) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, StateId s, unsigned e, std::string msg) {
    report.violations.push_back({kind, s, e, std::move(msg)});
  };
  const std::size_t n = d.states.size();
  const unsigned sigma = d.alphabet.size();
  auto event_name = [&](unsigned e) {
    return e < sigma ? d.alphabet.name(e) : "#" + std::to_string(e);
  };
  auto state_name = [&](StateId s) { return s < n ? d.states[s] : "#" + std::to_string(s); };

  if (n == 0) {
    add(ViolationKind::kBadState, 0, 0, "observer has no states");
    return report;
  }
  if (d.initial >= n) add(ViolationKind::kBadState, d.initial, 0, "initial state is not declared");
  if (d.watch.size() != n) {
    add(ViolationKind::kBadState, 0, 0, "watch-set table does not cover every state");
  }

  std::vector<EventSet> watch(n);
  for (StateId s = 0; s < std::min(n, d.watch.size()); ++s) {
    for (unsigned e : d.watch[s]) {
      if (e >= sigma) {
        add(ViolationKind::kEventOutsideAlphabet, s, e,
            "watch-set of " + state_name(s) + " names event outside the alphabet");
      } else {
        watch[s].insert(e);
      }
    }
  }

  std::map<std::pair<StateId, unsigned>, std::vector<StateId>> targets;
  for (const auto& edge : d.edges) {
    if (edge.src >= n || edge.dst >= n) {
      add(ViolationKind::kBadState, edge.src, edge.event, "transition endpoint is not declared");
      continue;
    }
    if (edge.event >= sigma) {
      add(ViolationKind::kEventOutsideAlphabet, edge.src, edge.event,
          "transition on event outside the alphabet");
      continue;
    }
    auto& ts = targets[{edge.src, edge.event}];
    if (std::find(ts.begin(), ts.end(), edge.dst) == ts.end()) ts.push_back(edge.dst);
  }
  for (const auto& [key, ts] : targets) {
    auto [s, e] = key;
    if (ts.size() > 1) {
      add(ViolationKind::kNondeterminism, s, e,
          state_name(s) + " has several successors on " + event_name(e));
    }
    if (!watch[s].contains(e) &&
        std::any_of(ts.begin(), ts.end(), [s = s](StateId t) { return t != s; })) {
      add(ViolationKind::kStutterBreach, s, e,
          state_name(s) + " changes state on unwatched event " + event_name(e));
    }
  }
  for (StateId s = 0; s < n; ++s) {
    for (unsigned e : watch[s].indices()) {
      if (!targets.contains({s, e})) {
        add(ViolationKind::kMissingTransition, s, e,
            state_name(s) + " has no transition on watched event " + event_name(e));
      }
    }
  }
  return report;
}

Observer::Observer(const ObserverDraft& d) {
  auto report = validate_observer(d);
  if (!report.valid()) {
    throw InputError("invalid observer '" + d.name + "': " + report.violations.front().message);
  }
  name_ = d.name;
  alphabet_ = d.alphabet;
  state_names_ = d.states;
  initial_ = d.initial;
  const unsigned sigma = alphabet_.size();
  watch_.resize(state_names_.size());
  for (StateId s = 0; s < state_names_.size(); ++s) {
    for (unsigned e : d.watch[s]) watch_[s].insert(e);
  }
  table_.resize(state_names_.size() * sigma);
  for (StateId s = 0; s < state_names_.size(); ++s) {
    for (unsigned e = 0; e < sigma; ++e) table_[s * sigma + e] = s;
  }
  for (const auto& edge : d.edges) table_[edge.src * sigma + edge.event] = edge.dst;
}

StateId Observer::state_after(std::span<const Label> word) const {
  StateId s = initial_;
  for (Label l : word) {
    if (l.is_observable()) s = step(s, l.index());
  }
  return s;
}

ObserverDraft Observer::to_draft() const {
  ObserverDraft d;
  d.name = name_;
  d.alphabet = alphabet_;
  d.states = state_names_;
  d.initial = initial_;
  for (StateId s = 0; s < state_names_.size(); ++s) {
    d.watch.push_back(watch_[s].indices());
    for (unsigned e : watch_[s].indices()) d.edges.push_back({s, e, step(s, e)});
  }
  return d;
}

Observer static_observer(const Alphabet& alphabet, EventSet sub) {
  if (!sub.subset_of(alphabet.all())) throw InputError("watch-set outside the alphabet");
  ObserverDraft d;
  d.name = "static" + alphabet.format(sub);
  d.alphabet = alphabet;
  d.states = {"0"};
  d.watch = {sub.indices()};
  for (unsigned e : sub.indices()) d.edges.push_back({0, e, 0});
  return Observer(d);
}

Word observe_word(const Observer& obs, std::span<const Label> word) {
  Word out;
  StateId s = obs.initial();
  for (Label l : word) {
    if (!l.is_observable() || l.index() >= obs.alphabet().size()) {
      throw InputError("symbol outside the observer alphabet");
    }
    if (obs.watch(s).contains(l.index())) {
      out.push_back(l);
      s = obs.step(s, l.index());
    }
  }
  return out;
}

Word observe_run(const Plant& plant, const Observer& obs, const Run& run) {
  Word trace = trace_of_run(run);
  return observe_word(obs, project(trace, plant.alphabet().all(), plant.alphabet()));
}

AnnotatedHistory annotated_history(const Observer& obs, std::span<const Label> observation) {
  AnnotatedHistory h;
  StateId s = obs.initial();
  h.watches.push_back(obs.watch(s));
  for (Label l : observation) {
    if (!l.is_observable() || !obs.watch(s).contains(l.index())) {
      throw PreconditionError("symbol is not watched when it arrives; not an observation");
    }
    h.events.push_back(l);
    s = obs.step(s, l.index());
    h.watches.push_back(obs.watch(s));
  }
  return h;
}

std::string format_history(const AnnotatedHistory& h, const Alphabet& alphabet) {
  std::string out;
  for (std::size_t i = 0; i < h.watches.size(); ++i) {
    if (i > 0) out += "." + alphabet.label_name(h.events[i - 1]) + ".";
    out += alphabet.format(h.watches[i]);
  }
  return out;
}

}  // namespace dynobs
