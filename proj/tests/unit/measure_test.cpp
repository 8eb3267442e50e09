#include "degldp/measure.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "degldp/error.hpp"
#include "oracles.hpp"

namespace degldp {
namespace {

TEST(MeasureTest, RejectsInvalidWeights) {
  EXPECT_THROW(SparseMeasure({0.5, 0.4}), DomainError);
  EXPECT_THROW(SparseMeasure({1.5, -0.5}), DomainError);
  EXPECT_THROW(SparseMeasure(std::vector<double>{}), DomainError);
  EXPECT_THROW(SparseMeasure::normalized({0.0, 0.0}), DomainError);
  EXPECT_NO_THROW(SparseMeasure({0.25, 0.25, 0.5}));
}

TEST(MeasureTest, MeanOfPointMasses) {
  EXPECT_EQ(mean(SparseMeasure::point_mass(0)), 0.0);
  EXPECT_EQ(mean(SparseMeasure::point_mass(3)), 3.0);
  EXPECT_NEAR(mean(poisson_measure(2.0, 1e-12)), 2.0, 1e-9);
}

TEST(MeasureTest, MetricExamples) {
  const auto p = poisson_measure(1.3);
  EXPECT_EQ(metric_d(p, p), 0.0);
  EXPECT_DOUBLE_EQ(
      metric_d(SparseMeasure::point_mass(1), SparseMeasure::point_mass(2)),
      3.0);
  // The i = 0 coordinate carries no weight.
  EXPECT_DOUBLE_EQ(
      metric_d(SparseMeasure::point_mass(0), SparseMeasure::point_mass(2)),
      2.0);
}

TEST(MeasureTest, MetricAxiomsOnRandomTriples) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> support(0, 12);
  for (int trial = 0; trial < 500; ++trial) {
    const SparseMeasure a(testing::random_positive_weights(rng, support(rng)));
    const SparseMeasure b(testing::random_positive_weights(rng, support(rng)));
    const SparseMeasure c(testing::random_positive_weights(rng, support(rng)));
    EXPECT_GE(metric_d(a, b), 0.0);
    EXPECT_NEAR(metric_d(a, b), metric_d(b, a), 1e-14);
    EXPECT_LE(metric_d(a, c), metric_d(a, b) + metric_d(b, c) + 1e-12);
  }
}

TEST(MeasureTest, KlDivergence) {
  const auto p1 = poisson_measure(1.0, 1e-14);
  const auto p2 = poisson_measure(2.0, 1e-14);
  EXPECT_EQ(kl_divergence(p1, p1), 0.0);
  EXPECT_EQ(kl_divergence(SparseMeasure::point_mass(1),
                          SparseMeasure::point_mass(0)),
            std::numeric_limits<double>::infinity());
  // p_2 reaches past p_1's truncation point, which is an absolute-continuity
  // failure; compare on p_1's support.
  EXPECT_EQ(kl_divergence(p2, p1), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(kl_divergence(truncate_renormalize(p2, p1.support_max()), p1),
              2.0 * std::log(2.0) - 1.0, 1e-8);
}

TEST(MeasureTest, PoissonTruncation) {
  const auto p = poisson_measure(1.0, 1e-12);
  EXPECT_NEAR(p[0], std::exp(-1.0), 1e-9);
  EXPECT_NEAR(mean(p), 1.0, 1e-9);
  double total = 0.0;
  const auto half = poisson_measure(0.5, 1e-12);
  for (double w : half.weights()) total += w;
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Dropped tail mass is below the tolerance.
  double head = 0.0;
  for (std::size_t i = 0; i <= p.support_max(); ++i) {
    head += std::exp(-1.0 - std::lgamma(static_cast<double>(i) + 1.0));
  }
  EXPECT_LT(1.0 - head, 1e-12);
  EXPECT_THROW(poisson_measure(0.0), DomainError);
  EXPECT_THROW(poisson_measure(-1.0), DomainError);
}

TEST(RateFunctionTest, ZeroAtPoisson) {
  for (double beta : {0.5, 1.0, 2.0, 6.5}) {
    EXPECT_NEAR(rate_I(poisson_measure(beta, 1e-14), beta), 0.0, 1e-8)
        << "beta=" << beta;
  }
}

TEST(RateFunctionTest, PointMassAtZero) {
  const auto delta0 = SparseMeasure::point_mass(0);
  EXPECT_DOUBLE_EQ(rate_I(delta0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(rate_I_divergence_form(delta0, 2.0), 1.0);
  // D(delta_0 || p_beta) = beta.
  EXPECT_NEAR(kl_divergence(delta0, poisson_measure(2.0, 1e-16)), 2.0, 1e-12);
}

TEST(RateFunctionTest, PoissonSectionFormula) {
  EXPECT_NEAR(rate_I(poisson_measure(2.0, 1e-14), 1.0),
              0.5 * (2.0 * std::log(2.0) - 1.0), 1e-8);
}

TEST(RateFunctionTest, TwoFormsAgreeAndAreNonNegative) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> support(0, 25);
  for (int trial = 0; trial < 10'000; ++trial) {
    const double beta = std::array{0.5, 1.0, 2.0, 6.5}[trial % 4];
    const SparseMeasure mu(testing::random_positive_weights(rng, support(rng)));
    const double first = rate_I(mu, beta);
    const double second = rate_I_divergence_form(mu, beta);
    ASSERT_NEAR(first, second, 1e-10);
    ASSERT_GE(first, -1e-12);
  }
}

TEST(RateFunctionTest, LevelSetMeanBound) {
  // I(mu) >= (m/2) log m - m (log 2 + (1 + log beta)/2) + beta/2 - log 2.
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::size_t> support(0, 60);
  for (int trial = 0; trial < 4000; ++trial) {
    const double beta = std::array{0.5, 1.0, 2.0, 6.5}[trial % 4];
    const SparseMeasure mu(testing::random_positive_weights(rng, support(rng)));
    const double m = mean(mu);
    const double m_log_m = m > 0.0 ? m * std::log(m) : 0.0;
    const double bound = 0.5 * m_log_m -
                         m * (std::log(2.0) + (1.0 + std::log(beta)) / 2.0) +
                         beta / 2.0 - std::log(2.0);
    ASSERT_GE(rate_I(mu, beta), bound - 1e-12);
  }
}

TEST(TruncationTest, Examples) {
  const auto delta0 = SparseMeasure::point_mass(0);
  EXPECT_EQ(truncate_renormalize(delta0, 0), delta0);
  const auto p1 = poisson_measure(1.0);
  EXPECT_EQ(truncate_renormalize(p1, p1.support_max()), p1);
  const SparseMeasure uniform({0.25, 0.25, 0.25, 0.25});
  const auto head = truncate_renormalize(uniform, 1);
  ASSERT_EQ(head.support_max(), 1U);
  EXPECT_DOUBLE_EQ(head[0], 0.5);
  EXPECT_DOUBLE_EQ(head[1], 0.5);
  EXPECT_THROW(truncate_renormalize(SparseMeasure::point_mass(3), 1),
               DomainError);
}

TEST(TruncationTest, ConvergesInMetricAndRate) {
  const auto nu = poisson_measure(3.0, 1e-14);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t k = 3; k <= nu.support_max(); ++k) {
    const double d = metric_d(truncate_renormalize(nu, k), nu);
    EXPECT_LE(d, previous + 1e-15) << "k=" << k;
    previous = d;
  }
  EXPECT_EQ(previous, 0.0);
  EXPECT_NEAR(rate_I(truncate_renormalize(nu, 15), 2.0), rate_I(nu, 2.0),
              1e-6);
}

TEST(MeasureCsvTest, RoundTripIsBitExact) {
  const auto p = poisson_measure(2.7);
  std::stringstream buffer;
  write_csv(buffer, p);
  EXPECT_EQ(buffer.str().rfind("i,weight\n", 0), 0U);
  EXPECT_EQ(read_csv(buffer), p);
  std::stringstream bad("x,y\n0,1\n");
  EXPECT_THROW(read_csv(bad), DomainError);
}

}  // namespace
}  // namespace degldp
