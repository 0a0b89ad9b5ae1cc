#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "doflab/engine.hpp"
#include "doflab/error.hpp"
#include "doflab/rates.hpp"

using namespace doflab;

namespace {

// log2 det(I + rho A A^H) by complex Gaussian elimination with partial pivoting.
double log2det_oracle(const Matrix<Complex>& a, const std::vector<std::size_t>& cols, double rho) {
  const std::size_t n = a.rows;
  std::vector<std::vector<Complex>> m(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = i == j ? 1.0 : 0.0;
      for (std::size_t c : cols) s += rho * a(i, c) * std::conj(a(j, c));
      m[i][j] = s;
    }
  }
  double logdet = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m[i][k]) > std::abs(m[p][k])) p = i;
    }
    std::swap(m[p], m[k]);
    logdet += std::log2(std::abs(m[k][k]));
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return logdet;
}

Matrix<Complex> random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix<Complex> m(r, c);
  for (auto& e : m.data) e = {n(rng), n(rng)};
  return m;
}

}  // namespace

TEST(SnrPoint, Construction) {
  EXPECT_DOUBLE_EQ(SnrPoint::from_db(30).power(), 1000.0);
  EXPECT_DOUBLE_EQ(SnrPoint(100, 4).per_stream_power(), 25.0);
  EXPECT_THROW(SnrPoint(0), ParameterError);
  EXPECT_THROW(SnrPoint(-1), ParameterError);
  EXPECT_THROW(SnrPoint(std::numeric_limits<double>::infinity()), ParameterError);
  EXPECT_THROW(SnrPoint(1, 0), ParameterError);
}

TEST(MutualInfo, ScalarChannel) {
  Matrix<Complex> g(1, 1);
  g(0, 0) = 1.0;
  for (double p : {1.0, 10.0, 1e6}) EXPECT_NEAR(mutual_info(g, {0}, SnrPoint(p)), std::log2(1 + p), 1e-9);
  EXPECT_EQ(mutual_info(g, {}, SnrPoint(10)), 0.0);
}

TEST(MutualInfo, MonotoneInPower) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto g = random_matrix(rng, 3, 4);
    double prev = -1;
    for (double db = 0; db <= 60; db += 10) {
      const double v = mutual_info(g, {0, 2}, SnrPoint::from_db(db));
      EXPECT_GE(v, prev - 1e-9);
      prev = v;
    }
  }
}

TEST(MutualInfo, MatchesEliminationOracle) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const auto g = random_matrix(rng, 3, 4);
    const double rho = 50.0;
    std::vector<std::size_t> all{0, 1, 2, 3};
    std::vector<std::size_t> other{1, 3};
    const double expected = log2det_oracle(g, all, rho) - log2det_oracle(g, other, rho);
    EXPECT_NEAR(mutual_info(g, {0, 2}, SnrPoint(rho)), expected, 1e-6);
  }
}

TEST(MutualInfo, ChainRule) {
  // I(a, b) = I(a) on the whole matrix plus I(b) once a is treated as known.
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto g = random_matrix(rng, 3, 3);
    const SnrPoint snr(200);
    const double joint = mutual_info(g, {0, 1}, snr);
    const double first = mutual_info(g, {0}, snr);
    const auto rest = g.select_columns({1, 2});
    const double second = mutual_info(rest, {0}, snr);
    EXPECT_NEAR(joint, first + second, 1e-6);
  }
}

TEST(MutualInfo, RejectsNonFinite) {
  Matrix<Complex> g(1, 1);
  g(0, 0) = {std::nan(""), 0};
  EXPECT_THROW(mutual_info(g, {0}, SnrPoint(1)), NumericError);
}

TEST(Slope, HybridSchemeMatchesTuple) {
  const auto s = parse_scheme(builtin("hybrid-5over3-a"));
  const auto slopes = dof_slope(s, 1, {60, 100});
  ASSERT_EQ(slopes.size(), 3u);
  EXPECT_NEAR(slopes[0].slope, 1.0, 0.05);
  EXPECT_NEAR(slopes[1].slope, 1.0 / 3, 0.05);
  EXPECT_NEAR(slopes[2].slope, 1.0 / 3, 0.05);
  for (const auto& r : slopes) {
    EXPECT_FALSE(r.rank_deficient);
    EXPECT_LT(r.bits_low, r.bits_high);
  }
  const auto swapped = dof_slope(s, 1, {100, 60});
  EXPECT_DOUBLE_EQ(swapped[0].slope, slopes[0].slope);
}

TEST(Slope, SilentSchemeHasZeroSlope) {
  const auto s = parse_scheme("scheme \"t\"; users 2; antennas 2; slots 2\ncsit 1-2: P D\ndata a -> R1\n");
  for (const auto& r : dof_slope(s, 1, {60, 100})) EXPECT_NEAR(r.slope, 0.0, 1e-12);
  EXPECT_EQ(max_streams_per_slot(s), 1);
}

TEST(Slope, ArgumentChecks) {
  const auto s = parse_scheme(builtin("hybrid-5over3-a"));
  EXPECT_THROW(dof_slope(s, 1, {30, 100}), ParameterError);
  EXPECT_THROW(dof_slope(s, 1, {60, 60}), ParameterError);
  EXPECT_THROW(dof_slope(s, 1, {60, std::nan("")}), ParameterError);
  EXPECT_EQ(max_streams_per_slot(s), 5);
}
