#include "dynobs/alphabet.hpp"

#include <algorithm>

#include "dynobs/error.hpp"

namespace dynobs {

std::vector<unsigned> EventSet::indices() const {
  std::vector<unsigned> out;
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(static_cast<unsigned>(std::countr_zero(m)));
  }
  return out;
}

bool lex_less(EventSet a, EventSet b) {
  auto ia = a.indices();
  auto ib = b.indices();
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxEvents) {
    throw InputError("alphabet has " + std::to_string(names_.size()) + " events; at most " +
                     std::to_string(kMaxEvents) + " are supported");
  }
  for (unsigned i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty()) throw InputError("empty event name");
    if (n == kEpsilonToken || n == kFaultToken || n == kUnobservableToken) {
      throw InputError("reserved token '" + n + "' cannot be an observable event");
    }
    if (!index_.emplace(n, i).second) throw InputError("duplicate event '" + n + "'");
  }
}

std::optional<unsigned> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Alphabet::label_name(Label l) const {
  if (l.is_epsilon()) return std::string(kEpsilonToken);
  if (l.is_fault()) return std::string(kFaultToken);
  return name(l.index());
}

Label Alphabet::label(std::string_view name) const {
  if (name == kEpsilonToken) return Label::epsilon();
  if (name == kFaultToken) return Label::fault();
  auto i = find(name);
  if (!i) throw InputError("undeclared event '" + std::string(name) + "'");
  return Label::event(*i);
}

EventSet Alphabet::set_of(const std::vector<std::string>& names) const {
  EventSet s;
  for (const auto& n : names) {
    auto i = find(n);
    if (!i) throw InputError("undeclared event '" + n + "'");
    s.insert(*i);
  }
  return s;
}

std::string Alphabet::format(EventSet s) const {
  std::string out = "{";
  bool first = true;
  for (unsigned i : s.indices()) {
    if (!first) out += ",";
    out += i < size() ? name(i) : ("#" + std::to_string(i));
    first = false;
  }
  return out + "}";
}

}  // namespace dynobs
