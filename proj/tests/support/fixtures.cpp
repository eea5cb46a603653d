#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace dynobs::testing {

Plant plant_b() {
  Alphabet ab({"a", "b"});
  const Label a = Label::event(0), b = Label::event(1);
  return Automaton("B", ab, {"s0", "s1", "s2", "s3", "s4", "s5"}, 0,
                   {{0, Label::fault(), 1},
                    {1, a, 2},
                    {2, b, 3},
                    {3, Label::epsilon(), 3},
                    {0, b, 4},
                    {4, a, 5},
                    {5, Label::epsilon(), 5}});
}

Observer observer_a_then_b() {
  ObserverDraft d;
  d.name = "a_then_b";
  d.alphabet = Alphabet({"a", "b"});
  d.states = {"0", "1", "2"};
  d.initial = 0;
  d.watch = {{0}, {1}, {}};
  d.edges = {{0, 0, 1}, {1, 1, 2}};
  return Observer(d);
}

Label ev(const Alphabet& a, const std::string& name) { return a.label(name); }

Word word_of(const Alphabet& a, const std::string& letters) {
  Word w;
  for (char c : letters) w.push_back(a.label(std::string(1, c)));
  return w;
}

std::string letters_of(const Alphabet& a, const Word& w) {
  std::string out;
  for (Label l : w) out += a.label_name(l);
  return out;
}

bool isomorphic(const Automaton& x, const Automaton& y) {
  if (x.num_states() != y.num_states() || x.transitions().size() != y.transitions().size()) return false;
  if (!(x.alphabet() == y.alphabet())) return false;
  std::vector<StateId> perm(x.num_states());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (perm[x.initial()] != y.initial()) continue;
    bool ok = true;
    for (const auto& t : x.transitions()) {
      if (!y.has_transition(perm[t.src], t.label, perm[t.dst])) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

Automaton expected_masked_b() {
  const Label a = Label::event(0), b = Label::event(1), eps = Label::epsilon();
  return Automaton("masked-b", Alphabet({"a", "b"}), {"x0", "x1", "x2", "x3", "x4", "x5"}, 0,
                   {{0, Label::fault(), 1}, {1, a, 2}, {2, b, 3}, {3, eps, 3}, {0, eps, 4}, {4, a, 5}, {5, eps, 5}});
}

}  // namespace dynobs::testing
