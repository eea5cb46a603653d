#pragma once

#include <string>

#include "dynobs/automaton.hpp"
#include "dynobs/observer.hpp"

namespace dynobs::testing {

// Plant B: s0 -f-> s1 -a-> s2 -b-> s3 (ε-loop), s0 -b-> s4 -a-> s5 (ε-loop).
Plant plant_b();
// Watches {a}, then {b} after a, then nothing after b.
Observer observer_a_then_b();

Label ev(const Alphabet& a, const std::string& name);
/// Word from a string of single-letter event names.
Word word_of(const Alphabet& a, const std::string& letters);
std::string letters_of(const Alphabet& a, const Word& w);

/// Graph isomorphism preserving the initial state and labels, by trying
/// every bijection (small automata only).
bool isomorphic(const Automaton& x, const Automaton& y);

/// Masked product of B with the a-then-b observer, built by hand.
Automaton expected_masked_b();

}  // namespace dynobs::testing
