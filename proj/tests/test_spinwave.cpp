#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "xxzlr/errors.hpp"
#include "xxzlr/spinwave.hpp"

using namespace xxzlr;

namespace {

ModelParams ring(double alpha, double j, int n) { return {alpha, j, n, Boundary::periodic}; }

}  // namespace

TEST(CosineSum, ClosedFormMatchesDirectSum) {
  for (int n = 2; n <= 4096; n = n < 64 ? n + 2 : n * 2) {
    const int step = std::max(1, n / 64);
    for (int k = -n / 2 + 1; k <= n / 2; k += step) {
      ASSERT_NEAR(long_range_cosine_sum(n, k), long_range_cosine_sum_closed(n, k), 1e-10) << n << " " << k;
    }
    ASSERT_NEAR(long_range_cosine_sum_closed(n, 0), n / 2.0, 1e-12);
  }
  EXPECT_THROW(long_range_cosine_sum(7, 1), InvalidParams);
}

TEST(FmDispersion, ZeroMomentum) {
  oracle::Gen gen(2);
  for (int t = 0; t < 10; ++t) {
    const double alpha = gen.uniform(-2, 3), j = gen.uniform(-2, 3);
    EXPECT_NEAR(fm_dispersion(ring(alpha, j, 2 * gen.integer(1, 200)), 0), 1 - alpha + j / 2, 1e-12);
  }
  EXPECT_NEAR(fm_dispersion(ring(1, 0, 32), 0), 0.0, 1e-15);
}

TEST(FmDispersion, IsingBandIsFlat) {
  for (int k = -15; k <= 16; ++k) EXPECT_NEAR(fm_dispersion(ring(0, 0, 32), k), 1.0, 1e-15);
}

TEST(FmDispersion, ShortRangeReduction) {
  oracle::Gen gen(4);
  for (int t = 0; t < 10; ++t) {
    const double alpha = gen.uniform(-2, 3);
    const int n = 2 * gen.integer(1, 100);
    const int k = gen.integer(-n / 2 + 1, n / 2);
    EXPECT_NEAR(fm_dispersion(ring(alpha, 0, n), k), 1 - alpha * std::cos(2 * std::numbers::pi * k / n), 1e-14);
  }
}

TEST(FmStability, BoundaryExamples) {
  EXPECT_TRUE(fm_stability(ring(0.9, 1, 256)).stable);
  EXPECT_FALSE(fm_stability(ring(1.1, 1, 256)).stable);
  EXPECT_FALSE(fm_stability(ring(0.8, -0.6, 256)).stable);
  EXPECT_DOUBLE_EQ(fm_phase_boundary(2), 1.0);
  EXPECT_DOUBLE_EQ(fm_phase_boundary(-1), 0.5);
  EXPECT_DOUBLE_EQ(fm_phase_boundary(0), 1.0);
}

TEST(FmStability, RootOfMinimumModeTracksBoundary) {
  for (double j : {-1.5, -1.0, -0.4, 0.0, 0.5, 1.0, 2.0}) {
    const double star = fm_phase_boundary(j);
    EXPECT_TRUE(fm_stability(ring(star - 0.02, j, 2048)).stable) << j;
    EXPECT_FALSE(fm_stability(ring(star + 0.02, j, 2048)).stable) << j;
  }
}

TEST(FmSpectrum, CoversZoneOnce) {
  const auto s = fm_spectrum(ring(0.5, 0.3, 10));
  ASSERT_EQ(s.modes.size(), 10u);
  EXPECT_EQ(s.modes.front().k, -4);
  EXPECT_EQ(s.modes.back().k, 5);
  for (const auto& m : s.modes) {
    EXPECT_EQ(m.mu, 0.0);
    EXPECT_EQ(m.energy, m.omega);
  }
  EXPECT_TRUE(s.stable);
}

TEST(XyCoefficients, IsotropicPoint) {
  for (int k = -7; k <= 8; ++k) {
    const auto c = xy_coefficients(ring(1, 0, 16), k);
    EXPECT_NEAR(c.mu, 0.0, 1e-15);
    EXPECT_NEAR(c.omega, 1 - std::cos(2 * std::numbers::pi * k / 16), 1e-14);
  }
}

TEST(XyCoefficients, ZeroMomentum) {
  oracle::Gen gen(6);
  for (int t = 0; t < 10; ++t) {
    const double alpha = gen.uniform(-2, 3), j = gen.uniform(-2, 3);
    const auto c = xy_coefficients(ring(alpha, j, 2 * gen.integer(1, 200)), 0);
    EXPECT_NEAR(c.omega, (alpha - 1) / 2 - j / 4, 1e-12);
    EXPECT_NEAR(c.mu, (1 - alpha) / 2 - j / 4, 1e-12);
  }
}

TEST(XyCoefficients, DirectSummation) {
  const int n = 100;
  const double alpha = 2, j = 1, q = 2 * std::numbers::pi / n;
  double lr = 0.0;
  for (int r = 1; r <= n / 2; ++r) lr += std::cos(q * r);
  lr *= j / (2.0 * n);
  const auto c = xy_coefficients(ring(alpha, j, n), 1);
  EXPECT_NEAR(c.omega, (alpha - j / 2) - (1 + alpha) / 2 * std::cos(q) + lr, 1e-13);
  EXPECT_NEAR(c.mu, (1 - alpha) / 2 * std::cos(q) - lr, 1e-13);
}

TEST(Bogoliubov, Examples) {
  EXPECT_DOUBLE_EQ(*bogoliubov_energy(1.7, 0), 3.4);
  EXPECT_DOUBLE_EQ(*bogoliubov_energy(2.5, 2.5), 0.0);
  EXPECT_DOUBLE_EQ(*bogoliubov_energy(5, 3), 8.0);
  EXPECT_FALSE(bogoliubov_energy(1, 2).has_value());
}

TEST(XySpectrum, UnstableModesAreFlagged) {
  const auto s = xy_spectrum(ring(1.5, 0.5, 64));
  EXPECT_EQ(s.modes.size(), 64u);
  EXPECT_FALSE(s.stable);
  bool any_invalid = false;
  for (const auto& m : s.modes)
    if (!m.valid) {
      any_invalid = true;
      EXPECT_TRUE(std::isnan(m.energy));
    }
  EXPECT_TRUE(any_invalid);
  EXPECT_TRUE(xy_spectrum(ring(1.5, -0.5, 64)).stable);
}

TEST(ExcitationDensity, IsotropicPointIsZero) {
  const auto sizes = default_density_sizes();
  const auto r = excitation_density(1, 0, sizes);
  for (auto [n, d] : r.finite_n_series) EXPECT_NEAR(d, 0.0, 1e-15) << n;
  EXPECT_EQ(r.classification, DensityScaling::convergent);
}

TEST(ExcitationDensity, ShortRangeDivergesLogarithmically) {
  const auto sizes = default_density_sizes();
  const auto r = excitation_density(1.5, 0, sizes);
  EXPECT_EQ(r.classification, DensityScaling::log_divergent);
  EXPECT_GT(r.log_slope, kLogDivergenceSlope);
  for (std::size_t i = 1; i < r.finite_n_series.size(); ++i)
    EXPECT_GT(r.finite_n_series[i].second, r.finite_n_series[i - 1].second);
}

TEST(ExcitationDensity, PositiveLongRangeBreaksExpansion) {
  // With the all-to-all term entering as +J, J > 0 pushes omega below |mu|
  // near q = 0 and the x-polarized expansion has no real spectrum.
  EXPECT_THROW(excitation_density_at(1.5, 0.5, 64), ModeInstability);
  try {
    excitation_density_at(1.5, 0.5, 64);
  } catch (const ModeInstability& e) {
    EXPECT_EQ(e.n_sites(), 64);
  }
  EXPECT_THROW(classify_spinwave(1.5, 0.5), Unclassifiable);
}

TEST(ExcitationDensity, NegativeLongRangeConverges) {
  const auto sizes = default_density_sizes();
  const auto r = excitation_density(1.5, -0.5, sizes);
  EXPECT_EQ(r.classification, DensityScaling::convergent);
  EXPECT_LT(std::abs(r.log_slope), kLogDivergenceSlope);
}

TEST(ExcitationDensity, RejectsBadSizes) {
  EXPECT_THROW(excitation_density(1.5, 0, std::vector<int>{64}), InsufficientPoints);
  EXPECT_THROW(excitation_density(1.5, 0, std::vector<int>{128, 64}), InvalidParams);
}

TEST(Integrand, InverseMomentumAtShortRange) {
  const double q1 = 1e-4, q2 = 1e-2;
  const double slope = std::log(excitation_integrand(1.5, 0, q2) / excitation_integrand(1.5, 0, q1)) / std::log(q2 / q1);
  EXPECT_NEAR(slope, -1.0, 0.05);
}

TEST(Integrand, BoundedWhenGapped) {
  double worst = 0.0;
  for (double q = 1e-4; q <= 1e-2; q *= 1.5) worst = std::max(worst, excitation_integrand(1.5, -0.5, q));
  EXPECT_LT(worst, 1.0);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_spinwave(0.5, 1), Phase::fm);
  EXPECT_EQ(classify_spinwave(1.5, 0), Phase::tll);
  EXPECT_EQ(classify_spinwave(1.5, -0.5), Phase::xy_ssb);
  EXPECT_EQ(classify_spinwave(1.0, 0), Phase::fm);
  EXPECT_EQ(classify_spinwave(1.01, 0), Phase::tll);
}
