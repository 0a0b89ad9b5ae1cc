#include <gtest/gtest.h>

#include <random>
#include <set>

#include "doflab/csit.hpp"
#include "doflab/dof_point.hpp"
#include "doflab/error.hpp"
#include "doflab/rational.hpp"
#include "doflab/subset.hpp"
#include "oracles.hpp"

using namespace doflab;
using oracle::q;

TEST(Rational, ReduceExamples) {
  EXPECT_EQ(rational_reduce(2, 6), q(1, 3));
  EXPECT_EQ(rational_reduce(-3, -9), q(1, 3));
  const auto z = rational_reduce(0, 5);
  EXPECT_EQ(z.num(), 0);
  EXPECT_EQ(z.den(), 1);
  EXPECT_THROW(rational_reduce(1, 0), DivisionByZero);
}

TEST(Rational, AlwaysReducedWithPositiveDenominator) {
  const Rational r(BigInt(10), BigInt(-4));
  EXPECT_EQ(r.num(), -5);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(r.str(), "-5/2");
  EXPECT_EQ(Rational(7).str(), "7");
}

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Rational::parse("1/2"), q(1, 2));
  EXPECT_EQ(Rational::parse("-4/6"), q(-2, 3));
  EXPECT_EQ(Rational::parse("5"), q(5));
  EXPECT_EQ(Rational::parse("17/9").str(), "17/9");
  EXPECT_THROW(Rational::parse("1/0"), DivisionByZero);
  EXPECT_THROW(Rational::parse(""), ParameterError);
  EXPECT_THROW(Rational::parse("a/b"), ParameterError);
  EXPECT_THROW(Rational::parse("1/2/3"), ParameterError);
  EXPECT_THROW(Rational::parse("0.5"), ParameterError);
}

TEST(Rational, ArithmeticAndOrdering) {
  EXPECT_EQ(q(1, 2) + q(1, 3), q(5, 6));
  EXPECT_EQ(q(1, 2) - q(1, 3), q(1, 6));
  EXPECT_EQ(q(2, 3) * q(9, 4), q(3, 2));
  EXPECT_EQ(q(2, 3) / q(4, 9), q(3, 2));
  EXPECT_THROW(q(1) / q(0), DivisionByZero);
  EXPECT_LT(q(18, 11), q(5, 3));
  EXPECT_GT(q(13, 12), q(1));
  EXPECT_EQ(q(-3, 4).abs(), q(3, 4));
  EXPECT_DOUBLE_EQ(q(1, 4).to_double(), 0.25);
}

TEST(Rational, LargeValuesStayExact) {
  Rational r(1);
  for (int i = 0; i < 200; ++i) r *= q(3, 2);
  for (int i = 0; i < 200; ++i) r /= q(3, 2);
  EXPECT_EQ(r, q(1));
}

TEST(Rational, RoundTripProperty) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto a = oracle::small_rational(rng, 1000, 97);
    auto b = oracle::small_rational(rng, 1000, 97);
    if (b.is_zero()) b = q(1, 7);
    EXPECT_EQ((a + b) - b, a);
    EXPECT_EQ((a * b) / b, a);
    EXPECT_EQ(gcd(abs(a.num()), a.den()) == 1 || a.is_zero(), true);
  }
}

TEST(Subsets, CanonicalOrder) {
  EXPECT_EQ(canonical_subsets(1), std::vector<UserSubset>{UserSubset::of({1})});
  const std::vector<UserSubset> two{UserSubset::of({1}), UserSubset::of({2}), UserSubset::of({1, 2})};
  EXPECT_EQ(canonical_subsets(2), two);
  const auto three = canonical_subsets(3);
  ASSERT_EQ(three.size(), 7u);
  EXPECT_EQ(three.back(), UserSubset::of({1, 2, 3}));
  EXPECT_EQ(three[3], UserSubset::of({1, 2}));
  EXPECT_EQ(three[4], UserSubset::of({1, 3}));
  EXPECT_EQ(three[5], UserSubset::of({2, 3}));
  EXPECT_THROW(canonical_subsets(0), ParameterError);
  EXPECT_THROW(canonical_subsets(17), ParameterError);
}

TEST(Subsets, IndexRoundTripAllK) {
  for (int k = 1; k <= 16; ++k) {
    const std::size_t count = (std::size_t{1} << k) - 1;
    std::set<std::uint32_t> masks;
    UserSubset prev;
    for (std::size_t i = 0; i < count; ++i) {
      const auto s = subset_at(i, k);
      ASSERT_EQ(subset_index(s, k), i);
      ASSERT_FALSE(s.empty());
      ASSERT_LE(s.max_member(), k);
      if (i > 0) {
        ASSERT_LT(prev, s);
      }
      masks.insert(s.mask());
      prev = s;
    }
    ASSERT_EQ(masks.size(), count) << "K=" << k;
  }
  const auto list = canonical_subsets(5);
  for (std::size_t i = 0; i < list.size(); ++i) EXPECT_EQ(subset_at(i, 5), list[i]);
}

TEST(Subsets, LabelsAndParsing) {
  EXPECT_EQ(UserSubset::of({1, 2, 3}).label(), "d_123");
  EXPECT_EQ(UserSubset::of({2}).label(), "d_2");
  EXPECT_EQ(UserSubset::of({1, 10}).label(), "d_1.10");
  EXPECT_EQ(UserSubset::parse("d_13"), UserSubset::of({1, 3}));
  EXPECT_EQ(UserSubset::parse("23"), UserSubset::of({2, 3}));
  EXPECT_EQ(UserSubset::parse("d_1.10"), UserSubset::of({1, 10}));
  EXPECT_THROW(UserSubset::parse("d_11"), ParameterError);
  EXPECT_THROW(UserSubset::parse("d_x"), ParameterError);
  EXPECT_THROW(UserSubset::of({0}), ParameterError);
  EXPECT_THROW(UserSubset::of({17}), ParameterError);
}

TEST(Subsets, SetOperations) {
  const auto a = UserSubset::of({1, 2});
  const auto b = UserSubset::of({2, 3});
  EXPECT_EQ(a | b, UserSubset::of({1, 2, 3}));
  EXPECT_EQ(a & b, UserSubset::of({2}));
  EXPECT_EQ(a - b, UserSubset::of({1}));
  EXPECT_TRUE(UserSubset::of({2}).subset_of(a));
  EXPECT_FALSE(a.subset_of(b));
  EXPECT_EQ(a.members(), (std::vector<int>{1, 2}));
  EXPECT_EQ(UserSubset::prefix(3), UserSubset::of({1, 2, 3}));
  EXPECT_EQ(UserSubset::range(2, 3), b);
}

TEST(Subsets, PermutationsLexicographic) {
  const auto p = permutations_of({3, 1, 2});
  ASSERT_EQ(p.size(), 6u);
  EXPECT_EQ(p.front(), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(p.back(), (std::vector<int>{3, 2, 1}));
  EXPECT_EQ(permutations_of({}).size(), 1u);
}

TEST(DofPoint, ZeroEntriesAreImplicit) {
  DofPoint a(3);
  a.set(UserSubset::of({1}), q(1));
  DofPoint b(3);
  b.set(UserSubset::of({1}), q(1));
  b.set(UserSubset::of({2}), q(0));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.get(UserSubset::of({2, 3})), q(0));
  EXPECT_EQ(DofPoint::private_tuple({q(1), q(1, 3), q(1, 3)}).sum(), q(5, 3));
}

TEST(DofPoint, RejectsNegativeAndForeignSubsets) {
  DofPoint p(3);
  EXPECT_THROW(p.set(UserSubset::of({1}), q(-1, 2)), ParameterError);
  EXPECT_THROW(p.set(UserSubset::of({4}), q(1)), ParameterError);
}

TEST(DofPoint, Printing) {
  const auto p = DofPoint::private_tuple({q(1), q(1, 3), q(1, 3)});
  EXPECT_EQ(p.str(canonical_subsets(3)), "(1, 1/3, 1/3, 0, 0, 0, 0)");
  EXPECT_EQ(p.str(), "d_1=1,d_2=1/3,d_3=1/3");
}

TEST(Csit, HybridModel) {
  const auto c = CsitConfig::hybrid(3, 1, 6);
  EXPECT_EQ(c.at(1, 1), CsitState::Perfect);
  EXPECT_EQ(c.at(6, 3), CsitState::Delayed);
  EXPECT_TRUE(c.is_static_hybrid());
  EXPECT_EQ(c.perfect_users(), 1);
  EXPECT_THROW(c.at(7, 1), ParameterError);
  EXPECT_THROW(CsitConfig::hybrid(3, 4, 1), ParameterError);
}

TEST(Csit, AlternatingIsNotStaticHybrid) {
  std::vector<CsitState> cells;
  for (int t = 1; t <= 2; ++t) {
    cells.push_back(t == 1 ? CsitState::Perfect : CsitState::None);
    cells.push_back(CsitState::Delayed);
  }
  const CsitConfig c(2, 2, cells);
  EXPECT_FALSE(c.is_static_hybrid());
  EXPECT_THROW(CsitConfig(2, 2, std::vector<CsitState>(3, CsitState::Perfect)), ParameterError);
  EXPECT_EQ(csit_from_code('N'), CsitState::None);
  EXPECT_EQ(csit_code(CsitState::Delayed), 'D');
  EXPECT_THROW(csit_from_code('X'), ParameterError);
}
