#include "dynobs/product.hpp"

#include <map>

#include "dynobs/error.hpp"

namespace dynobs {

MaskedProduct masked_product(const Plant& plant, const Observer& obs) {
  if (!(plant.alphabet() == obs.alphabet())) {
    throw InputError("observer alphabet differs from plant alphabet");
  }
  std::map<std::pair<StateId, StateId>, StateId> index;
  std::vector<std::pair<StateId, StateId>> pairs;
  auto intern = [&](StateId q, StateId s) {
    auto [it, fresh] = index.emplace(std::make_pair(q, s), static_cast<StateId>(pairs.size()));
    if (fresh) pairs.emplace_back(q, s);
    return it->second;
  };

  // Keep the least plant label per product transition.
  std::map<Transition, Label> labelled;
  intern(plant.initial(), obs.initial());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [q, s] = pairs[i];
    const StateId from = static_cast<StateId>(i);
    for (const auto& t : plant.out(q)) {
      Transition pt;
      if (t.label.is_observable()) {
        const unsigned e = t.label.index();
        const bool watched = obs.watch(s).contains(e);
        pt = {from, watched ? t.label : Label::epsilon(), intern(t.dst, obs.step(s, e))};
      } else {
        pt = {from, t.label, intern(t.dst, s)};
      }
      labelled.emplace(pt, t.label);
    }
  }

  std::vector<Transition> ts;
  std::vector<Label> origin;
  for (const auto& [t, l] : labelled) {
    ts.push_back(t);
    origin.push_back(l);
  }
  std::vector<std::string> names;
  for (auto [q, s] : pairs) names.push_back("(" + plant.state_name(q) + "," + obs.state_name(s) + ")");

  MaskedProduct mp{Automaton(plant.name() + "*" + obs.name(), plant.alphabet(), std::move(names), 0, ts),
                   std::move(pairs), std::move(origin)};
  return mp;
}

Run MaskedProduct::to_plant_run(const Run& r) const {
  Run out{components.at(r.start).first, {}};
  StateId cur = r.start;
  for (const auto& st : r.steps) {
    auto idx = automaton.index_of(Transition{cur, st.label, st.target});
    if (!idx) throw PreconditionError("run is not a run of the masked product");
    out.steps.push_back({origin[*idx], components[st.target].first});
    cur = st.target;
  }
  return out;
}

Lasso MaskedProduct::to_plant_lasso(const Lasso& l) const {
  Lasso out;
  out.stem = to_plant_run(l.stem);
  Run loop = to_plant_run(Run{l.stem.end(), l.cycle});
  out.cycle = std::move(loop.steps);
  return out;
}

}  // namespace dynobs
