#include "dynobs/automaton.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <unordered_map>

#include "dynobs/error.hpp"

namespace dynobs {

Run Lasso::unroll(std::size_t times) const {
  Run r = stem;
  for (std::size_t i = 0; i < times; ++i) r.steps.insert(r.steps.end(), cycle.begin(), cycle.end());
  return r;
}

Automaton::Automaton(std::string name, Alphabet alphabet, std::vector<std::string> states,
                     StateId initial, std::vector<Transition> transitions)
    : name_(std::move(name)),
      alphabet_(std::move(alphabet)),
      state_names_(std::move(states)),
      initial_(initial),
      transitions_(std::move(transitions)) {
  if (state_names_.empty()) throw InputError("automaton '" + name_ + "' has no states");
  if (initial_ >= state_names_.size()) throw InputError("initial state is not declared");
  {
    std::unordered_map<std::string, StateId> seen;
    for (StateId s = 0; s < state_names_.size(); ++s) {
      if (!seen.emplace(state_names_[s], s).second) {
        throw InputError("duplicate state '" + state_names_[s] + "'");
      }
    }
  }
  for (const auto& t : transitions_) {
    if (t.src >= state_names_.size() || t.dst >= state_names_.size()) {
      throw InputError("transition endpoint is not a declared state");
    }
    if (t.label.is_observable() && t.label.index() >= alphabet_.size()) {
      throw InputError("transition label outside the alphabet");
    }
  }
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  offsets_.assign(state_names_.size() + 1, 0);
  for (const auto& t : transitions_) ++offsets_[t.src + 1];
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
}

std::optional<StateId> Automaton::find_state(std::string_view name) const {
  for (StateId s = 0; s < state_names_.size(); ++s) {
    if (state_names_[s] == name) return s;
  }
  return std::nullopt;
}

std::span<const Transition> Automaton::out(StateId s) const {
  return {transitions_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
}

std::optional<std::size_t> Automaton::index_of(const Transition& t) const {
  auto it = std::lower_bound(transitions_.begin(), transitions_.end(), t);
  if (it == transitions_.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - transitions_.begin());
}

bool Automaton::has_transition(StateId src, Label label, StateId dst) const {
  return index_of(Transition{src, label, dst}).has_value();
}

bool Automaton::has_fault() const {
  return std::any_of(transitions_.begin(), transitions_.end(),
                     [](const Transition& t) { return t.label.is_fault(); });
}

bool Automaton::is_live() const {
  for (StateId s = 0; s < num_states(); ++s) {
    if (out(s).empty()) return false;
  }
  return true;
}

bool Automaton::accepts_run(const Run& run) const {
  if (run.start >= num_states()) return false;
  StateId cur = run.start;
  for (const auto& st : run.steps) {
    if (!has_transition(cur, st.label, st.target)) return false;
    cur = st.target;
  }
  return true;
}

bool Automaton::accepts_lasso(const Lasso& lasso) const {
  if (!accepts_run(lasso.stem)) return false;
  if (lasso.cycle.empty()) return true;
  Run loop{lasso.stem.end(), lasso.cycle};
  return accepts_run(loop) && loop.end() == lasso.stem.end();
}

Word project(std::span<const Label> word, EventSet sub, const Alphabet& alphabet) {
  Word out;
  for (Label l : word) {
    if (!l.is_observable()) continue;
    if (l.index() >= alphabet.size()) {
      throw InputError("symbol outside the declared alphabet");
    }
    if (sub.contains(l.index())) out.push_back(l);
  }
  return out;
}

Word trace_of_run(const Run& run) {
  Word out;
  for (const auto& st : run.steps) {
    if (!st.label.is_epsilon()) out.push_back(st.label);
  }
  return out;
}

Automaton epsilon_complete(const Automaton& a) {
  std::vector<Transition> ts = a.transitions();
  for (StateId s = 0; s < a.num_states(); ++s) {
    if (a.out(s).empty()) ts.push_back({s, Label::epsilon(), s});
  }
  return Automaton(a.name(), a.alphabet(), a.state_names(), a.initial(), std::move(ts));
}

bool classify_k_faulty(const Run& run, unsigned k) {
  const std::size_t n = run.length();
  for (std::size_t i = 0; i < n; ++i) {
    // Step i+1 in 1-based numbering leaves n - (i + 1) further steps.
    if (run.steps[i].label.is_fault() && n - (i + 1) >= k) return true;
  }
  return false;
}

bool is_faulty(const Run& run) {
  return std::any_of(run.steps.begin(), run.steps.end(),
                     [](const Step& s) { return s.label.is_fault(); });
}

Automaton sync_product(const Automaton& a1, const Automaton& a2) {
  std::vector<std::string> names = a1.alphabet().names();
  for (const auto& n : a2.alphabet().names()) {
    if (!a1.alphabet().find(n)) names.push_back(n);
  }
  Alphabet merged(names);
  auto remap = [&](const Alphabet& from, Label l) {
    return l.is_observable() ? Label::event(*merged.find(from.name(l.index()))) : l;
  };
  auto shared = [&](Label merged_label) {
    if (!merged_label.is_observable()) return false;
    const auto& n = merged.name(merged_label.index());
    return a1.alphabet().find(n).has_value() && a2.alphabet().find(n).has_value();
  };

  std::map<std::pair<StateId, StateId>, StateId> index;
  std::vector<std::pair<StateId, StateId>> pairs;
  std::vector<Transition> ts;
  auto intern = [&](StateId p, StateId q) {
    auto [it, fresh] = index.emplace(std::make_pair(p, q), static_cast<StateId>(pairs.size()));
    if (fresh) pairs.emplace_back(p, q);
    return it->second;
  };
  intern(a1.initial(), a2.initial());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    const StateId from = static_cast<StateId>(i);
    for (const auto& t1 : a1.out(p)) {
      Label l = remap(a1.alphabet(), t1.label);
      if (shared(l)) {
        for (const auto& t2 : a2.out(q)) {
          if (remap(a2.alphabet(), t2.label) == l) ts.push_back({from, l, intern(t1.dst, t2.dst)});
        }
      } else {
        ts.push_back({from, l, intern(t1.dst, q)});
      }
    }
    for (const auto& t2 : a2.out(q)) {
      Label l = remap(a2.alphabet(), t2.label);
      if (!shared(l)) ts.push_back({from, l, intern(p, t2.dst)});
    }
  }
  std::vector<std::string> state_names;
  state_names.reserve(pairs.size());
  for (auto [p, q] : pairs) {
    state_names.push_back("(" + a1.state_name(p) + "," + a2.state_name(q) + ")");
  }
  return Automaton(a1.name() + "x" + a2.name(), merged, std::move(state_names), 0, std::move(ts));
}

std::vector<Run> enumerate_runs(const Automaton& a, std::size_t max_len, std::size_t cap) {
  if (max_len > cap) {
    throw PreconditionError("run enumeration length " + std::to_string(max_len) +
                            " exceeds cap " + std::to_string(cap));
  }
  std::vector<Run> out;
  std::vector<Run> frontier{Run{a.initial(), {}}};
  for (std::size_t len = 0;; ++len) {
    out.insert(out.end(), frontier.begin(), frontier.end());
    if (len == max_len) break;
    std::vector<Run> next;
    for (const auto& r : frontier) {
      for (const auto& t : a.out(r.end())) {
        Run ext = r;
        ext.steps.push_back({t.label, t.dst});
        next.push_back(std::move(ext));
      }
    }
    if (next.empty()) break;
    frontier = std::move(next);
  }
  return out;
}

}  // namespace dynobs
