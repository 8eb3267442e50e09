#include "degldp/statistic.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "degldp/error.hpp"

namespace degldp {
namespace {

TEST(StatisticTest, ZeroStatistic) {
  const auto f = zero_statistic();
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(f(i), 0.0);
  EXPECT_EQ(f.growth().kind, Growth::kBounded);
}

TEST(StatisticTest, AlternatingKStarClosedForm) {
  const auto f = alt_kstar_statistic(0.5, 1.0);
  EXPECT_DOUBLE_EQ(f(2), 1.0);
  // Agrees with the alternating binomial sum it abbreviates.
  for (std::size_t i = 0; i < 25; ++i) {
    double direct = 0.0;
    for (std::size_t k = 2; k <= i; ++k) {
      direct += (k % 2 == 0 ? 1.0 : -1.0) * binomial(i, k) *
                std::pow(0.5, static_cast<double>(k) - 2.0);
    }
    EXPECT_NEAR(f(i), direct, 1e-9 * (1.0 + std::abs(direct))) << "i=" << i;
  }
  EXPECT_EQ(f.growth().kind, Growth::kLinear);
  EXPECT_DOUBLE_EQ(f.growth().constant, 3.0);
}

TEST(StatisticTest, KStar) {
  const auto negative = kstar_statistic(2, -1.0);
  EXPECT_DOUBLE_EQ(negative(3), -3.0);
  EXPECT_FALSE(negative.superlinear());
  EXPECT_TRUE(kstar_statistic(2, 0.5).superlinear());
  EXPECT_DOUBLE_EQ(kstar_statistic(3, 2.0)(5), 20.0);
  EXPECT_EQ(kstar_statistic(3, 2.0)(2), 0.0);
}

TEST(StatisticTest, GwdIsShiftedToVanishAtZero) {
  const auto f = gwd_statistic(1.0, 2.0);
  EXPECT_EQ(f(0), 0.0);
  EXPECT_DOUBLE_EQ(f(1), 2.0 * (std::exp(-1.0) - 1.0));
  EXPECT_EQ(f.growth().kind, Growth::kBounded);
  EXPECT_NE(f.label().find("shifted"), std::string::npos);
}

TEST(StatisticTest, Penalty) {
  const auto f = penalty_statistic(std::log(0.5));
  EXPECT_EQ(f(0), 0.0);
  EXPECT_DOUBLE_EQ(f(1), std::log(0.5));
  EXPECT_DOUBLE_EQ(f(17), std::log(0.5));
  EXPECT_EQ(f.growth().kind, Growth::kBounded);
}

TEST(StatisticTest, Linear) {
  const auto f = linear_statistic(-0.7);
  EXPECT_DOUBLE_EQ(f(10), -7.0);
  EXPECT_EQ(f.growth().kind, Growth::kLinear);
}

TEST(StatisticTest, RejectsInvalidParameters) {
  EXPECT_THROW(kstar_statistic(1, -1.0), DomainError);
  EXPECT_THROW(gwd_statistic(0.0, 1.0), DomainError);
  EXPECT_THROW(alt_kstar_statistic(1.0, 1.0), DomainError);
  EXPECT_THROW(alt_kstar_statistic(0.0, 1.0), DomainError);
  EXPECT_THROW(custom_statistic({1.0, 2.0}), DomainError);
  EXPECT_THROW(custom_statistic({}), DomainError);
}

TEST(StatisticTest, CustomTableExtendsConstantly) {
  const auto f = custom_statistic({0.0, 0.5, -1.0});
  EXPECT_DOUBLE_EQ(f(1), 0.5);
  EXPECT_DOUBLE_EQ(f(2), -1.0);
  EXPECT_DOUBLE_EQ(f(100), -1.0);
  EXPECT_EQ(f.growth().kind, Growth::kBounded);
}

TEST(StatisticTest, TableChecksDeclaredGrowth) {
  const DegreeStatistic liar(
      "liar", [](std::size_t i) { return static_cast<double>(i * i); },
      GrowthClass{Growth::kLinear, 1.0, false}, UpperEnvelope{1.0, 0.0});
  EXPECT_NO_THROW(liar.table(1));
  EXPECT_THROW(liar.table(5), DomainError);
  EXPECT_NO_THROW(alt_kstar_statistic(0.3, -2.0).table(500));
  EXPECT_NO_THROW(kstar_statistic(2, -1.0).table(500));
}

}  // namespace
}  // namespace degldp
