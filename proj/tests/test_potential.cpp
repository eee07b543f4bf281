#include <gtest/gtest.h>

#include <cmath>

#include "wigflux/error.hpp"
#include "wigflux/potential.hpp"

namespace wigflux {
namespace {

TEST(PotentialModel, CatalogValues) {
  const auto h = PotentialModel::harmonic();
  const auto q = PotentialModel::quartic(0.1);
  const auto pq = PotentialModel::pure_quartic();
  const auto dw = PotentialModel::double_well(0.25);
  for (double x : {-2.0, -0.3, 0.0, 0.7, 1.5}) {
    EXPECT_DOUBLE_EQ(h.value(x), 0.5 * x * x);
    EXPECT_DOUBLE_EQ(q.value(x), 0.5 * x * x + 0.1 * x * x * x * x);
    EXPECT_DOUBLE_EQ(pq.value(x), 0.25 * x * x * x * x);
    EXPECT_DOUBLE_EQ(dw.value(x), -0.5 * x * x + 0.25 * x * x * x * x);
  }
  EXPECT_TRUE(h.is_harmonic());
  EXPECT_FALSE(pq.is_harmonic());
  EXPECT_EQ(q.parameter(), 0.1);
  EXPECT_EQ(pq.degree(), 4);
}

TEST(PotentialModel, AnalyticDerivatives) {
  const auto pq = PotentialModel::pure_quartic();
  for (double x : {-1.2, 0.0, 0.4, 2.0}) {
    EXPECT_DOUBLE_EQ(pq.derivative(x, 1), x * x * x);
    EXPECT_DOUBLE_EQ(pq.derivative(x, 2), 3.0 * x * x);
    EXPECT_DOUBLE_EQ(pq.derivative(x, 3), 6.0 * x);
    EXPECT_DOUBLE_EQ(pq.derivative(x, 4), 6.0);
    EXPECT_EQ(pq.derivative(x, 5), 0.0);
    EXPECT_EQ(pq.derivative(x, 9), 0.0);
  }
  EXPECT_TRUE(pq.derivative_vanishes(5));
  EXPECT_FALSE(pq.derivative_vanishes(4));
  EXPECT_TRUE(PotentialModel::harmonic().derivative_vanishes(3));
}

TEST(PotentialModel, DerivativesMatchFiniteDifferencesFourthOrder) {
  const auto q = PotentialModel::quartic(0.3);
  auto fd_error = [&](double h) {
    double worst = 0.0;
    for (double x : {-1.5, -0.2, 0.9, 1.7}) {
      const double fd = (-q.value(x + 2 * h) + 8 * q.value(x + h) - 8 * q.value(x - h) +
                         q.value(x - 2 * h)) /
                        (12 * h);
      worst = std::max(worst, std::abs(fd - q.derivative(x, 1)));
    }
    return worst;
  };
  // The five-point stencil is exact through x^4, so the error is round-off.
  EXPECT_LT(fd_error(1e-2), 1e-9);
  const auto d3 = [&](double x, double h) {
    return (q.derivative(x + h, 2) - q.derivative(x - h, 2)) / (2 * h);
  };
  EXPECT_NEAR(d3(0.8, 1e-3), q.derivative(0.8, 3), 1e-6);
}

TEST(PotentialModel, ParityExact) {
  for (const auto& p : {PotentialModel::harmonic(), PotentialModel::quartic(0.7),
                        PotentialModel::pure_quartic(), PotentialModel::double_well(0.1)}) {
    EXPECT_TRUE(p.parity_even());
    for (double x : {0.1, 0.77, 1.3, 3.9}) EXPECT_EQ(p.value(x), p.value(-x)) << p.label();
  }
}

TEST(PotentialModel, RejectsOddTermsAndUnboundedShapes) {
  EXPECT_THROW(PotentialModel("odd", {0.0, 1.0, 0.5}), Error);
  EXPECT_THROW(PotentialModel("down", {0.0, 0.0, -0.5}), Error);
  EXPECT_THROW(PotentialModel::quartic(-0.1), Error);
  EXPECT_THROW(PotentialModel::double_well(0.0), Error);
  EXPECT_NO_THROW(PotentialModel("custom", {1.0, 0.0, 0.5}));
}

}  // namespace
}  // namespace wigflux
