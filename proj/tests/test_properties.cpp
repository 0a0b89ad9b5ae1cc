#include <gtest/gtest.h>

#include "properties.hpp"

using namespace props;

TEST(Property, ExpansionLinearityPrimeField) { EXPECT_EQ(expansion_linearity<ModP>(101), ""); }
TEST(Property, ExpansionLinearityRational) { EXPECT_EQ(expansion_linearity<Rational>(102), ""); }

TEST(Property, ZeroForcingExactPrimeField) { EXPECT_EQ(zero_forcing_exact<ModP>(201), ""); }
TEST(Property, ZeroForcingExactRational) { EXPECT_EQ(zero_forcing_exact<Rational>(202), ""); }
TEST(Property, ZeroForcingFloatWithinTolerance) { EXPECT_EQ(zero_forcing_exact<Complex>(203), ""); }

TEST(Property, LpOptimumAtVertex) { EXPECT_EQ(lp_optimum_at_vertex(301), ""); }
TEST(Property, SliceContainsCommute) { EXPECT_EQ(slice_contains_commute(401), ""); }
TEST(Property, RelabelingDelayedUsersPreservesBounds) { EXPECT_EQ(relabeling_symmetry(501), ""); }
TEST(Property, CanonicalFormIsScaleInvariant) { EXPECT_EQ(canonical_scale_invariance(601), ""); }
TEST(Property, SchemeRoundTrip) { EXPECT_EQ(scheme_round_trip(701), ""); }
TEST(Property, RationalFieldLaws) { EXPECT_EQ(rational_field_laws(801), ""); }
TEST(Property, EngineRankMatchesOracle) { EXPECT_EQ(engine_rank_matches_oracle(901), ""); }
