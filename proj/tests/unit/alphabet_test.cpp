#include <gtest/gtest.h>

#include "dynobs/alphabet.hpp"
#include "dynobs/error.hpp"

namespace dynobs {
namespace {

TEST(Alphabet, RejectsDuplicatesAndReservedNames) {
  EXPECT_THROW(Alphabet({"a", "a"}), InputError);
  EXPECT_THROW(Alphabet({"_eps"}), InputError);
  EXPECT_THROW(Alphabet({"_fault"}), InputError);
  std::vector<std::string> many;
  for (unsigned i = 0; i <= kMaxEvents; ++i) many.push_back("e" + std::to_string(i));
  EXPECT_THROW(Alphabet{many}, InputError);
}

TEST(Alphabet, ResolvesLabels) {
  Alphabet ab({"a", "b"});
  EXPECT_TRUE(ab.label("_eps").is_epsilon());
  EXPECT_TRUE(ab.label("_fault").is_fault());
  EXPECT_EQ(ab.label("b"), Label::event(1));
  EXPECT_THROW(ab.label("c"), InputError);
  EXPECT_EQ(ab.label_name(Label::fault()), "_fault");
  EXPECT_EQ(ab.format(ab.set_of({"b", "a"})), "{a,b}");
  EXPECT_EQ(ab.format(EventSet()), "{}");
  EXPECT_THROW(ab.set_of({"z"}), InputError);
}

TEST(EventSet, LexOrder) {
  const EventSet none, a(1), b(2), ab(3);
  EXPECT_TRUE(lex_less(none, a));
  EXPECT_TRUE(lex_less(a, ab));
  EXPECT_TRUE(lex_less(ab, b));
  EXPECT_FALSE(lex_less(b, ab));
  EXPECT_FALSE(lex_less(a, a));
  EXPECT_EQ(ab.size(), 2u);
  EXPECT_TRUE(a.subset_of(ab));
  EXPECT_FALSE(ab.subset_of(b));
}

TEST(Label, OrdersEpsilonThenFaultThenEvents) {
  EXPECT_LT(Label::epsilon(), Label::fault());
  EXPECT_LT(Label::fault(), Label::event(0));
  EXPECT_LT(Label::event(0), Label::event(1));
}

}  // namespace
}  // namespace dynobs
