#include "degldp/tilted_family.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "degldp/error.hpp"
#include "degldp/summation.hpp"

namespace degldp {
namespace {

std::vector<DegreeStatistic> builtin_statistics() {
  return {zero_statistic(),
          linear_statistic(0.3),
          kstar_statistic(2, -0.5),
          kstar_statistic(3, -1.0),
          gwd_statistic(0.5, -2.0),
          gwd_statistic(1.0, 2.0),
          alt_kstar_statistic(0.5, -1.0),
          alt_kstar_statistic(0.5, 1.0),
          penalty_statistic(std::log(0.5)),
          penalty_statistic(std::log(3.0))};
}

TEST(LogNormalizerTest, Examples) {
  for (double theta : {0.0, 0.3, 1.0, 7.5}) {
    EXPECT_NEAR(log_normalizer(theta, zero_statistic()), theta, 1e-13);
  }
  EXPECT_NEAR(log_normalizer(1.0, penalty_statistic(0.0)), 1.0, 1e-13);
  // log(1 + e^gamma (e^theta - 1)) at theta = 2, e^gamma = 1/2.
  EXPECT_NEAR(log_normalizer(2.0, penalty_statistic(std::log(0.5))),
              1.433780830483027, 1e-12);
  EXPECT_EQ(log_normalizer(0.0, gwd_statistic(1.0, 2.0)), 0.0);
}

TEST(LogNormalizerTest, SuperlinearIsDegenerate) {
  EXPECT_THROW(log_normalizer(1.0, kstar_statistic(2, 0.5)),
               DegenerateStatistic);
  EXPECT_THROW(tilted_mean(1.0, kstar_statistic(2, 0.5)),
               DegenerateStatistic);
  EXPECT_THROW(variational_objective(1.0, kstar_statistic(2, 0.5), 1.0),
               DegenerateStatistic);
}

TEST(TiltedMeanTest, Examples) {
  EXPECT_NEAR(tilted_mean(3.2, zero_statistic()), 3.2, 1e-12);
  EXPECT_EQ(tilted_mean(0.0, alt_kstar_statistic(0.5, 1.0)), 0.0);
  EXPECT_NEAR(tilted_mean(2.0, penalty_statistic(std::log(0.04))),
              0.4708046062705515, 1e-12);
}

TEST(TiltedMeanTest, StrictlyIncreasing) {
  for (const auto& f : builtin_statistics()) {
    double previous = 0.0;
    for (double theta = 0.05; theta <= 12.0; theta += 0.05) {
      const double m = tilted_mean(theta, f);
      ASSERT_GT(m, previous) << f.label() << " theta=" << theta;
      ASSERT_GT(tilted_variance(theta, f), 0.0);
      previous = m;
    }
  }
}

TEST(TiltedMeanTest, DerivativeOfLogNormalizer) {
  // m(theta) = theta dC/dtheta, checked by central differences.
  for (const auto& f : builtin_statistics()) {
    for (double theta = 0.1; theta <= 10.0; theta += 0.7) {
      const double h = 1e-6 * theta;
      const double derivative =
          (log_normalizer(theta + h, f) - log_normalizer(theta - h, f)) /
          (2.0 * h);
      EXPECT_NEAR(derivative, tilted_mean(theta, f) / theta, 1e-5)
          << f.label() << " theta=" << theta;
    }
  }
}

TEST(TiltTest, RealizedMeasureMatchesDefinition) {
  const auto f = alt_kstar_statistic(0.5, -1.0);
  const TiltedMeasure sigma = tilt(2.5, f);
  EXPECT_NEAR(mean(sigma.measure), sigma.mean_value, 1e-12);
  for (std::size_t i = 0; i < 10; ++i) {
    const double expected =
        std::exp(static_cast<double>(i) * std::log(2.5) -
                 std::lgamma(static_cast<double>(i) + 1.0) + f(i) -
                 sigma.log_normalizer);
    EXPECT_NEAR(sigma.measure[i], expected, 1e-14);
  }
  const TiltedMeasure at_zero = tilt(0.0, f);
  EXPECT_EQ(at_zero.measure, SparseMeasure::point_mass(0));
  EXPECT_EQ(at_zero.mean_value, 0.0);
}

TEST(VariationalObjectiveTest, Examples) {
  for (double beta : {0.5, 2.0, 6.5}) {
    EXPECT_NEAR(variational_objective(beta, zero_statistic(), beta), 0.0,
                1e-13);
  }
  EXPECT_EQ(variational_objective(0.0, gwd_statistic(1.0, 2.0), 2.0), 1.0);
}

double direct_rate_minus_statistic(double theta, const DegreeStatistic& f,
                                   double beta) {
  const TiltedMeasure sigma = tilt(theta, f);
  CompensatedSum expectation;
  const auto w = sigma.measure.weights();
  for (std::size_t i = 0; i < w.size(); ++i) expectation += w[i] * f(i);
  return rate_I(sigma.measure, beta) - expectation.value();
}

TEST(VariationalObjectiveTest, EqualsRateMinusExpectation) {
  EXPECT_NEAR(variational_objective(1.0, kstar_statistic(2, -1.0), 1.0),
              direct_rate_minus_statistic(1.0, kstar_statistic(2, -1.0), 1.0),
              1e-8);
  const auto stats = builtin_statistics();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> theta_draw(0.01, 10.0);
  std::uniform_real_distribution<double> beta_draw(0.2, 8.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto& f = stats[static_cast<std::size_t>(trial) % stats.size()];
    const double theta = theta_draw(rng);
    const double beta = beta_draw(rng);
    EXPECT_NEAR(variational_objective(theta, f, beta),
                direct_rate_minus_statistic(theta, f, beta), 1e-8)
        << f.label() << " theta=" << theta << " beta=" << beta;
  }
}

TEST(StationarityTest, Examples) {
  EXPECT_NEAR(stationarity_residual(2.0, zero_statistic(), 2.0), 0.0, 1e-13);
  EXPECT_NEAR(stationarity_residual(1.0, zero_statistic(), 4.0), 1.0, 1e-13);
}

TEST(SolveJTest, ErdosRenyiHasUniqueMinimizerAtBeta) {
  for (double beta : {0.5, 1.0, 2.0, 6.5}) {
    const auto solution = solve_J(zero_statistic(), beta);
    ASSERT_EQ(solution.minimizers.size(), 1U) << "beta=" << beta;
    EXPECT_NEAR(solution.minimizers[0].theta, beta, 1e-8);
    EXPECT_NEAR(solution.j_value, 0.0, 1e-12);
    EXPECT_FALSE(solution.degenerate);
  }
}

TEST(SolveJTest, PositiveKStarIsDegenerate) {
  EXPECT_THROW(solve_J(kstar_statistic(2, 0.5), 1.0), DegenerateStatistic);
}

TEST(SolveJTest, NegativeKStarMatchesBruteForceGrid) {
  const auto f = kstar_statistic(2, -1.0);
  const auto solution = solve_J(f, 1.0);
  ASSERT_EQ(solution.minimizers.size(), 1U);
  EXPECT_GT(solution.j_value, 0.0);

  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (int k = 0; k <= 100'000; ++k) {
    const double theta = 1e-4 * k;
    const double v = variational_objective(theta, f, 1.0);
    if (v < best) {
      best = v;
      best_theta = theta;
    }
  }
  EXPECT_NEAR(solution.j_value, best, 1e-6);
  EXPECT_NEAR(solution.minimizers[0].theta, best_theta, 2e-4);
}

TEST(SolveJTest, EveryMinimizerIsStationary) {
  for (const auto& f : builtin_statistics()) {
    for (double beta : {0.5, 2.0, 6.5}) {
      const auto solution = solve_J(f, beta);
      ASSERT_FALSE(solution.minimizers.empty());
      for (const Minimizer& m : solution.local_minima) {
        EXPECT_LE(m.stationarity_residual, 1e-6) << f.label();
        EXPECT_LE(stationarity_residual(m.theta, f, beta), 1e-6);
      }
      for (const Minimizer& m : solution.minimizers) {
        EXPECT_LE(m.value - solution.j_value,
                  1e-9 * (1.0 + std::abs(solution.j_value)));
      }
    }
  }
}

TEST(SolveJTest, KStarFreeEnergyIsMonotoneInGamma) {
  double previous = std::numeric_limits<double>::infinity();
  for (double gamma = -3.0; gamma < 0.0; gamma += 0.25) {
    const double j = solve_J(kstar_statistic(2, gamma), 1.0).j_value;
    EXPECT_LE(j, previous + 1e-10) << "gamma=" << gamma;
    EXPECT_GT(j, 0.0);
    previous = j;
  }
  EXPECT_NEAR(solve_J(kstar_statistic(2, 0.0), 1.0).j_value, 0.0, 1e-12);
}

TEST(SolveJTest, NoConfinementWhenScanCannotGrow) {
  SolveOptions opts;
  opts.theta_max_start = 0.1;
  opts.max_doublings = 0;
  EXPECT_THROW(solve_J(zero_statistic(), 2.0, opts), NoConfinement);
}

TEST(SolveJTest, JsonRecord) {
  const auto json = to_json(solve_J(zero_statistic(), 2.0));
  EXPECT_NE(json.find("\"statistic_label\": \"zero\""), std::string::npos);
  EXPECT_NE(json.find("\"minimizers\""), std::string::npos);
  EXPECT_NE(json.find("\"residual\""), std::string::npos);
  EXPECT_NE(json.find("\"degenerate\": false"), std::string::npos);
}

}  // namespace
}  // namespace degldp
