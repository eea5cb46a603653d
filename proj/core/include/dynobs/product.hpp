#pragma once

#include <utility>
#include <vector>

#include "dynobs/automaton.hpp"
#include "dynobs/observer.hpp"

namespace dynobs {

/// A ⊗ Obs together with the bookkeeping needed to map its runs back to
/// plant runs.
struct MaskedProduct {
  Automaton automaton;
  /// (plant state, observer state) of each product state.
  std::vector<std::pair<StateId, StateId>> components;
  /// Plant label behind each product transition, indexed like
  /// automaton.transitions().
  std::vector<Label> origin;

  /// Maps a product run to the plant run it was built from.
  Run to_plant_run(const Run& product_run) const;
  Lasso to_plant_lasso(const Lasso& product_lasso) const;
};

/// Product where plant steps on events outside the observer's current
/// watch-set are relabelled ε. Observable steps advance the observer; ε and
/// f leave it in place. Throws InputError when the alphabets differ.
MaskedProduct masked_product(const Plant& plant, const Observer& obs);

}  // namespace dynobs
