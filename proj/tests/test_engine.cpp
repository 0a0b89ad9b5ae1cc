#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "doflab/bounds.hpp"
#include "doflab/engine.hpp"
#include "doflab/error.hpp"
#include "doflab/polytope.hpp"
#include "oracles.hpp"

using namespace doflab;
using oracle::q;

namespace {

Scheme load(const std::string& name) { return parse_scheme(builtin(name)); }

Scheme negative_control() {
  std::ifstream in(DOFLAB_TEST_DATA "/negative_control.scheme");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scheme(ss.str());
}

template <typename S>
ObservationSet<S> observe(const Scheme& s, std::uint64_t seed) {
  const auto h = draw_channels_as<S>(s, seed);
  return expand(s, h, make_precoders(s, h, precoder_seed(seed)));
}

}  // namespace

TEST(ModP, FieldAxioms) {
  const ModP a(123456789);
  const ModP b = ModP::from_signed(-5);
  EXPECT_EQ(b.value(), ModP::kModulus - 5);
  EXPECT_EQ((a * a.inverse()).value(), 1u);
  EXPECT_EQ((a / a).value(), 1u);
  EXPECT_EQ((a - a).value(), 0u);
  EXPECT_EQ(ModP(ModP::kModulus).value(), 0u);
  EXPECT_EQ(ModP(oracle::kP - 1) * ModP(oracle::kP - 1), ModP(1));
  EXPECT_THROW(ModP(0).inverse(), DivisionByZero);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = rng() % oracle::kP;
    const std::uint64_t y = rng() % oracle::kP;
    EXPECT_EQ((ModP(x) * ModP(y)).value(), oracle::mulmod(x, y));
    EXPECT_EQ((ModP(x) + ModP(y)).value(), oracle::addmod(x, y));
    EXPECT_EQ((ModP(x) - ModP(y)).value(), oracle::submod(x, y));
  }
}

TEST(Modes, Names) {
  EXPECT_EQ(parse_mode("prime"), ArithmeticMode::PrimeField);
  EXPECT_EQ(parse_mode("complex"), ArithmeticMode::ComplexFloat);
  EXPECT_EQ(mode_name(ArithmeticMode::RationalRandom), "rational");
  EXPECT_THROW(parse_mode("int"), ParameterError);
}

TEST(Channels, DeterministicPerSeed) {
  const auto s = load("hybrid-5over3-a");
  EXPECT_EQ(draw_channels_as<ModP>(s, 9), draw_channels_as<ModP>(s, 9));
  EXPECT_NE(draw_channels_as<ModP>(s, 9), draw_channels_as<ModP>(s, 10));
  EXPECT_EQ(draw_channels_as<Rational>(s, 9), draw_channels_as<Rational>(s, 9));
  const auto h = draw_channels_as<ModP>(s, 9);
  EXPECT_EQ(h.entries.size(), 6u * 3u * 3u);
  for (const auto& e : h.entries) EXPECT_LT(e.value(), ModP::kModulus);
  for (const auto& e : draw_channels_as<Rational>(s, 4).entries) {
    EXPECT_LE(e.den(), 256);
    EXPECT_LE(e.abs(), q(1 << 24));
  }
  EXPECT_EQ(trial_seed(1, 0), trial_seed(1, 0));
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
}

TEST(Channels, ComplexEntriesLookGaussian) {
  Scheme s = load("hybrid-5over3-a");
  s.slots = 2000;
  s.slot_streams.resize(2000);
  s.csit_ranges = {{1, 2000, {CsitState::Perfect, CsitState::Delayed, CsitState::Delayed}}};
  const auto h = draw_channels_as<Complex>(s, 12);
  double mean_re = 0;
  double power = 0;
  for (const auto& e : h.entries) {
    mean_re += e.real();
    power += std::norm(e);
  }
  const double n = static_cast<double>(h.entries.size());
  EXPECT_NEAR(mean_re / n, 0.0, 0.03);
  EXPECT_NEAR(power / n, 1.0, 0.05);
}

TEST(Channels, SlotsAreIndependent) {
  // Chi-squared test of the low byte of consecutive slot draws for uniformity of pairs.
  Scheme s = load("hybrid-5over3-a");
  s.slots = 4096;
  s.slot_streams.resize(4096);
  s.csit_ranges = {{1, 4096, {CsitState::Perfect, CsitState::Delayed, CsitState::Delayed}}};
  const auto h = draw_channels_as<ModP>(s, 21);
  std::vector<double> counts(16, 0.0);
  for (int t = 1; t < s.slots; ++t) {
    const auto a = h.at(t, 1, 0).value() & 3;
    const auto b = h.at(t + 1, 1, 0).value() & 3;
    counts[a * 4 + b] += 1;
  }
  const double expect = (s.slots - 1) / 16.0;
  double chi = 0;
  for (double c : counts) chi += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi, 37.7);  // 15 degrees of freedom, p = 0.001
}

TEST(Precoders, ZeroForcingIsExact) {
  const auto s = load("hybrid-5over3-a");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto h = draw_channels_as<ModP>(s, seed);
    const auto b = make_precoders(s, h, precoder_seed(seed));
    for (int t = 1; t <= s.slots; ++t) {
      for (std::size_t k = 0; k < s.streams(t).size(); ++k) {
        for (int r : s.streams(t)[k].zf.members()) EXPECT_TRUE(stream_gain(h, b, t, k, r).is_zero());
      }
    }
  }
}

TEST(Precoders, NppNullSpaceIsOneDimensional) {
  const auto s = parse_scheme(
      "scheme \"t\"; users 3; antennas 3; slots 1\ncsit 1: N P P\ndata a, b -> R1\nslot 1:\n"
      "  send a zf R2, R3\n  send b zf R2, R3\n");
  const auto h = draw_channels_as<Rational>(s, 5);
  const auto b = make_precoders(s, h, 99);
  // Two beams in a one-dimensional space are parallel.
  const auto& x = b.at(1, 0);
  const auto& y = b.at(1, 1);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(x[i] * y[j], x[j] * y[i]);
  }
  EXPECT_FALSE(validate(s).ok);
}

TEST(Precoders, FullZeroForcingIsInfeasible) {
  const auto s = parse_scheme(
      "scheme \"t\"; users 3; antennas 3; slots 1\ncsit 1: P P P\ndata a -> R1\nslot 1:\n  send a zf R1, R2, R3\n");
  const auto h = draw_channels_as<ModP>(s, 5);
  EXPECT_THROW(make_precoders(s, h, 1), InfeasibleError);
}

TEST(Expansion, SlotOneRowsOfHybridA) {
  const auto s = load("hybrid-5over3-a");
  const auto g = observe<ModP>(s, 3);
  const auto v = s.desired_columns(2);
  for (std::size_t c : v) EXPECT_TRUE(g.of(1)(0, c).is_zero());
  for (std::size_t c : s.desired_columns(1)) {
    if (c < 3) {
      EXPECT_FALSE(g.of(1)(0, c).is_zero());
    }
  }
  // Slot 5 retransmits the u-part of R3's slot-3 observation: support within u1..u6.
  for (std::size_t c : s.desired_columns(2)) EXPECT_TRUE(g.of(1)(4, c).is_zero());
  for (std::size_t c : s.desired_columns(3)) EXPECT_TRUE(g.of(1)(4, c).is_zero());
}

TEST(Expansion, EmptySlotGivesZeroRow) {
  const auto s = parse_scheme(
      "scheme \"t\"; users 2; antennas 2; slots 2\ncsit 1-2: P D\ndata a -> R1\ndata b -> R2\nslot 1:\n  send a\n");
  const auto g = observe<ModP>(s, 1);
  for (int r = 1; r <= 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) EXPECT_TRUE(g.of(r)(1, c).is_zero());
  }
}

TEST(Expansion, NonCausalReferenceThrows) {
  Scheme s = parse_scheme(
      "scheme \"t\"; users 2; antennas 2; slots 2\ncsit 1-2: P D\ndata a -> R1\nslot 1:\n  send a\n"
      "slot 2:\n  send obs(R2, 1)\n");
  s.slot_streams[0][0].expr.terms[0].atom = ObsAtom{2, 2};
  const auto h = draw_channels_as<ModP>(s, 1);
  EXPECT_THROW(expand(s, h, make_precoders(s, h, 1)), InfeasibleError);
}

TEST(DecodeCheck, SmallExamples) {
  Matrix<ModP> eye(2, 2);
  eye(0, 0) = ModP(1);
  eye(1, 1) = ModP(1);
  EXPECT_TRUE(decode_check(eye, {0}));
  EXPECT_TRUE(decode_check(eye, {0, 1}));
  Matrix<ModP> dup(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    dup(i, 0) = ModP(i + 1);
    dup(i, 1) = ModP(i + 1);
  }
  EXPECT_FALSE(decode_check(dup, {0}));
  EXPECT_EQ(rank(dup), 1u);
  Matrix<Complex> c(2, 2);
  c(0, 0) = {1, 0};
  c(1, 1) = {0, 1};
  EXPECT_TRUE(decode_check(c, {1}));
  c(1, 0) = {1, 0};
  c(0, 1) = {1, 0};
  c(1, 1) = {1, 0};
  EXPECT_FALSE(decode_check(c, {1}));
}

TEST(DecodeCheck, AgreesWithLeftNullSpaceOracle) {
  for (const auto& name : builtin_names()) {
    const auto s = load(name);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto g = observe<ModP>(s, seed);
      for (int r = 1; r <= s.users; ++r) {
        const auto& m = g.of(r);
        const auto d = s.desired_columns(r);
        EXPECT_EQ(decode_check(m, d), oracle::decodable(oracle::to_mod(m), d)) << name << " R" << r;
        EXPECT_EQ(rank(m), oracle::rank(oracle::to_mod(m)));
        EXPECT_TRUE(decode_check(m, d)) << name << " R" << r;
      }
    }
  }
}

TEST(DecodeCheck, RandomMatricesAgreeWithOracle) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const std::size_t rows = 2 + rng() % 4;
    const std::size_t cols = 2 + rng() % 4;
    Matrix<ModP> m(rows, cols);
    // Small entries and planted dependencies force rank deficiency regularly.
    for (auto& e : m.data) e = ModP(rng() % 3);
    if (rng() % 2) {
      for (std::size_t i = 0; i < rows; ++i) m(i, cols - 1) = m(i, 0) + m(i, 1);
    }
    std::vector<std::size_t> d;
    for (std::size_t c = 0; c < cols; ++c) {
      if (rng() % 2) d.push_back(c);
    }
    EXPECT_EQ(decode_check(m, d), oracle::decodable(oracle::to_mod(m), d));
  }
}

TEST(Simulate, BuiltinsAchieveClaimedTuples) {
  const auto a = simulate(load("hybrid-5over3-a"), 30, 1, ArithmeticMode::PrimeField);
  ASSERT_TRUE(a.achieved_dof.has_value());
  EXPECT_EQ(*a.achieved_dof, DofPoint::private_tuple({q(1), q(1, 3), q(1, 3)}));
  EXPECT_EQ(a.full_successes, 30);
  const auto alt = simulate(load("alt-npp-4over9"), 30, 1, ArithmeticMode::PrimeField);
  ASSERT_TRUE(alt.achieved_dof.has_value());
  EXPECT_EQ(*alt.achieved_dof, DofPoint::private_tuple({q(1), q(4, 9), q(4, 9)}));
}

TEST(Simulate, AchievedPointsRespectBounds) {
  const auto region = restrict_private(full_region(3, 1));
  for (const auto& name : {"hybrid-5over3-a", "hybrid-5over3-b"}) {
    const auto r = simulate(load(name), 5, 2, ArithmeticMode::PrimeField);
    ASSERT_TRUE(r.achieved_dof.has_value());
    EXPECT_TRUE(contains(region, *r.achieved_dof).feasible) << name;
  }
  // The alternating scheme reaches the corner of the d_1 = 1 slice: on the boundary.
  const auto alt = simulate(load("alt-npp-4over9"), 5, 2, ArithmeticMode::PrimeField);
  ASSERT_TRUE(alt.achieved_dof.has_value());
  const auto v = contains(region, *alt.achieved_dof);
  EXPECT_TRUE(v.feasible);
  EXPECT_EQ(v.tight.size(), 3u);
}

TEST(Simulate, ThreadCountDoesNotChangeResult) {
  const auto s = load("hybrid-5over3-b");
  const auto one = simulate(s, 16, 7, ArithmeticMode::PrimeField, 1);
  const auto four = simulate(s, 16, 7, ArithmeticMode::PrimeField, 4);
  EXPECT_EQ(one.successes_per_receiver, four.successes_per_receiver);
  EXPECT_EQ(one.full_successes, four.full_successes);
  EXPECT_EQ(one.achieved_dof, four.achieved_dof);
}

TEST(Simulate, NegativeControlAlwaysFails) {
  const auto r = simulate(negative_control(), 100, 1, ArithmeticMode::PrimeField);
  EXPECT_EQ(r.full_successes, 0);
  EXPECT_FALSE(r.achieved_dof.has_value());
  EXPECT_EQ(r.successes_per_receiver[1], 0);
  EXPECT_EQ(r.nominal_dof.get(UserSubset::of({2})), q(1, 2));
}

TEST(Simulate, BlockingIssuesAndBadTrials) {
  const auto bad = parse_scheme(
      "scheme \"t\"; users 2; antennas 2; slots 1\ncsit 1: P D\ndata a -> R1\nslot 1:\n  send obs(R2, 1)\n");
  EXPECT_THROW(simulate(bad, 1, 1, ArithmeticMode::PrimeField), InfeasibleError);
  EXPECT_THROW(simulate(load("hybrid-5over3-a"), 0, 1, ArithmeticMode::PrimeField), ParameterError);
}

TEST(Simulate, ModesAgree) {
  for (const auto& name : builtin_names()) {
    const auto s = load(name);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto f = run_trial(s, seed, ArithmeticMode::PrimeField);
      const auto r = run_trial(s, seed, ArithmeticMode::RationalRandom);
      const auto c = run_trial(s, seed, ArithmeticMode::ComplexFloat);
      for (std::size_t i = 0; i < f.receivers.size(); ++i) {
        EXPECT_EQ(f.receivers[i].decodable, r.receivers[i].decodable);
        EXPECT_EQ(f.receivers[i].decodable, c.receivers[i].decodable);
      }
    }
  }
}

TEST(Simulate, DroppingAnEquationBreaksReceiverOne) {
  // Without the slot-6 retransmission R1 has five equations in six unknowns.
  auto s = load("hybrid-5over3-a");
  s.slot_streams[5].clear();
  const auto r = simulate(s, 10, 1, ArithmeticMode::PrimeField);
  EXPECT_EQ(r.successes_per_receiver[0], 0);
  EXPECT_EQ(r.full_successes, 0);
}
