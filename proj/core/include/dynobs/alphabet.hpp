#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dynobs {

/// Maximum number of observable events; watch-sets are 32-bit masks.
inline constexpr unsigned kMaxEvents = 30;

/// Reserved tokens for the unobservable and fault events in model files.
inline constexpr std::string_view kEpsilonToken = "_eps";
inline constexpr std::string_view kFaultToken = "_fault";
/// Name used for the merged unobservable event when ε and f are relabeled
/// for cost computations.
inline constexpr std::string_view kUnobservableToken = "_u";

/// A transition label: ε, the fault event f, or an observable event index.
/// Ordering is ε < f < observable events in alphabet order.
class Label {
 public:
  constexpr Label() = default;

  static constexpr Label epsilon() { return Label(0); }
  static constexpr Label fault() { return Label(1); }
  static constexpr Label event(unsigned index) { return Label(index + 2); }

  constexpr bool is_epsilon() const { return code_ == 0; }
  constexpr bool is_fault() const { return code_ == 1; }
  constexpr bool is_observable() const { return code_ >= 2; }
  /// Index into the alphabet; only meaningful for observable labels.
  constexpr unsigned index() const { return code_ - 2; }
  constexpr std::uint32_t code() const { return code_; }

  friend constexpr auto operator<=>(Label, Label) = default;

 private:
  explicit constexpr Label(std::uint32_t code) : code_(code) {}
  std::uint32_t code_ = 0;
};

/// A set of observable events (a watch-set), stored as a bitmask over
/// alphabet indices.
class EventSet {
 public:
  constexpr EventSet() = default;
  explicit constexpr EventSet(std::uint32_t mask) : mask_(mask) {}

  static constexpr EventSet full(unsigned size) {
    return EventSet(size >= 32 ? ~0u : ((1u << size) - 1u));
  }

  constexpr bool contains(unsigned index) const { return (mask_ >> index) & 1u; }
  constexpr bool contains(Label l) const { return l.is_observable() && contains(l.index()); }
  constexpr void insert(unsigned index) { mask_ |= (1u << index); }
  constexpr unsigned size() const { return static_cast<unsigned>(std::popcount(mask_)); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool subset_of(EventSet o) const { return (mask_ & ~o.mask_) == 0; }
  constexpr std::uint32_t mask() const { return mask_; }

  std::vector<unsigned> indices() const;

  friend constexpr bool operator==(EventSet, EventSet) = default;

 private:
  std::uint32_t mask_ = 0;
};

/// Canonical order on watch-sets: lexicographic on ascending index lists,
/// so {} < {a} < {a,b} < {b}.
bool lex_less(EventSet a, EventSet b);

/// Observable events with a stable total order. ε and f are implicit and
/// never members.
class Alphabet {
 public:
  Alphabet() = default;
  /// Throws InputError on duplicate or reserved names, or more than
  /// kMaxEvents events.
  explicit Alphabet(std::vector<std::string> names);

  unsigned size() const { return static_cast<unsigned>(names_.size()); }
  const std::string& name(unsigned index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<unsigned> find(std::string_view name) const;
  EventSet all() const { return EventSet::full(size()); }

  /// Name of any label, rendering ε and f with their reserved tokens.
  std::string label_name(Label l) const;
  /// Resolves a name (or reserved token) to a label. Throws InputError.
  Label label(std::string_view name) const;
  /// Resolves a list of event names to a set. Throws InputError.
  EventSet set_of(const std::vector<std::string>& names) const;
  /// Renders a watch-set as "{a,b}".
  std::string format(EventSet s) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, unsigned> index_;
};

}  // namespace dynobs
