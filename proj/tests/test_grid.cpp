#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"
#include "wigflux/error.hpp"
#include "wigflux/grid.hpp"

namespace wigflux {
namespace {

using testing::gaussian_wigner;
using testing::kPi;

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a rejection";
  return ErrorKind::io;
}

TEST(PhaseSpaceGrid, SpacingAndSymmetry) {
  const PhaseSpaceGrid g(8.0, 256, 4.0, 129);
  EXPECT_DOUBLE_EQ(g.h_x(), 16.0 / 255.0);
  EXPECT_DOUBLE_EQ(g.h_k(), 8.0 / 128.0);
  EXPECT_EQ(g.x_min(), -g.x_max());
  EXPECT_EQ(g.k_min(), -g.k_max());
  EXPECT_DOUBLE_EQ(g.x(0), -8.0);
  EXPECT_NEAR(g.x(255), 8.0, 1e-14);
  EXPECT_EQ(g.k(64), 0.0);
  for (std::size_t i = 0; i < g.n_x(); ++i) EXPECT_NEAR(g.x(i), -g.x(g.n_x() - 1 - i), 1e-14);
  EXPECT_EQ(g.index(2, 3), 2 * 129 + 3);
  EXPECT_EQ(g.size(), 256u * 129u);
}

TEST(PhaseSpaceGrid, RejectsTooFewNodesAndBadExtent) {
  EXPECT_EQ(kind_of([] { PhaseSpaceGrid(8.0, 15, 8.0, 64); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { PhaseSpaceGrid(8.0, 64, 8.0, 8); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { PhaseSpaceGrid(0.0, 64, 8.0, 64); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { PhaseSpaceGrid(-1.0, 64, 8.0, 64); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { PhaseSpaceGrid(std::nan(""), 64, 8.0, 64); }), ErrorKind::config);
  EXPECT_NO_THROW(PhaseSpaceGrid(1.0, 16, 1.0, 16));
}

TEST(CoordinateGrid, RequiresPowerOfTwo) {
  const CoordinateGrid c(8.0, 256);
  EXPECT_DOUBLE_EQ(c.h(), 16.0 / 255.0);
  EXPECT_EQ(kind_of([] { CoordinateGrid(8.0, 200); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { CoordinateGrid(8.0, 8); }), ErrorKind::config);
  const CoordinateGrid axis = coordinate_axis(PhaseSpaceGrid(8.0, 128, 6.0, 100));
  EXPECT_EQ(axis.n(), 128u);
  EXPECT_EQ(axis.x_max(), 8.0);
}

TEST(DimensionlessMap, IdentityAtUnitScales) {
  const DimensionlessMap unit;
  EXPECT_NO_THROW(unit.validate());
  for (double v : {-2.5, 0.0, 1.0, 3.75}) {
    EXPECT_EQ(unit.to_x(v), v);
    EXPECT_EQ(unit.to_k(v), v);
    EXPECT_EQ(unit.to_tau(v), v);
  }
}

TEST(DimensionlessMap, RoundTripAndScaling) {
  const DimensionlessMap map{2.0, 3.0, 0.5};
  EXPECT_NEAR(map.to_x(1.0), std::sqrt(12.0), 1e-15);
  EXPECT_NEAR(map.to_k(1.0), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(map.to_tau(2.0), 6.0);
  for (double v : {-1.3, 0.2, 7.0}) {
    EXPECT_NEAR(map.to_q(map.to_x(v)), v, 1e-14);
    EXPECT_NEAR(map.to_p(map.to_k(v)), v, 1e-14);
    EXPECT_NEAR(map.to_t(map.to_tau(v)), v, 1e-14);
  }
  EXPECT_EQ(kind_of([] { DimensionlessMap{0.0, 1.0, 1.0}.validate(); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { DimensionlessMap{1.0, -1.0, 1.0}.validate(); }), ErrorKind::config);
  EXPECT_EQ(kind_of([] { DimensionlessMap{1.0, 1.0, 0.0}.validate(); }), ErrorKind::config);
}

TEST(IntegrateVolume, ConstantOnUnitSquare) {
  const PhaseSpaceGrid g(1.0, 33, 1.0, 17);
  EXPECT_NEAR(integrate_volume(ScalarField(g, 1.0)), 4.0, 1e-12);
}

TEST(IntegrateVolume, GroundStateGaussianNormalized) {
  const PhaseSpaceGrid g = testing::default_grid();
  const auto w = ScalarField::from_function(g, [](double x, double k) { return gaussian_wigner(x, k); });
  EXPECT_NEAR(integrate_volume(w), 1.0, 1e-6);
}

TEST(IntegrateVolume, ZeroFieldIsExactlyZero) {
  EXPECT_EQ(integrate_volume(ScalarField(testing::default_grid())), 0.0);
}

TEST(IntegrateVolume, RejectsNonFiniteWithNode) {
  ScalarField f(PhaseSpaceGrid(1.0, 16, 1.0, 16), 1.0);
  f(3, 7) = std::numeric_limits<double>::quiet_NaN();
  try {
    (void)integrate_volume(f);
    FAIL() << "expected rejection";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numerical);
    const std::string msg = e.what();
    EXPECT_NE(msg.find('3'), std::string::npos);
    EXPECT_NE(msg.find('7'), std::string::npos);
  }
}

TEST(IntegrateVolume, BilinearFieldsExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const double lx = 0.5 + std::abs(u(rng));
    const double lk = 0.5 + std::abs(u(rng));
    const PhaseSpaceGrid g(lx, 16 + static_cast<std::size_t>(trial), lk, 40);
    const auto f = ScalarField::from_function(
        g, [&](double x, double k) { return a + b * x + c * k + d * x * k; });
    const double exact = a * 4.0 * lx * lk;
    EXPECT_NEAR(integrate_volume(f), exact, 1e-12 * std::max(1.0, std::abs(exact)));
  }
}

TEST(IntegrateVolume, FullMaskMatchesNoMask) {
  const PhaseSpaceGrid g(2.0, 32, 2.0, 32);
  std::mt19937_64 rng(5);
  const ScalarField f = testing::random_field(g, rng);
  const NodeMask all(g, true);
  EXPECT_EQ(integrate_volume(f, &all), integrate_volume(f));
  const NodeMask none(g, false);
  EXPECT_EQ(integrate_volume(f, &none), 0.0);
  EXPECT_EQ(all.count(), g.size());
}

TEST(IntegrateVolume, Linearity) {
  const PhaseSpaceGrid g(3.0, 48, 2.0, 40);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField f = testing::random_field(g, rng);
    const ScalarField h = testing::random_field(g, rng);
    const double alpha = 1.7, beta = -0.3;
    ScalarField sum(g);
    for (std::size_t n = 0; n < g.size(); ++n)
      sum.values()[n] = alpha * f.values()[n] + beta * h.values()[n];
    const double lhs = integrate_volume(sum);
    const double rhs = alpha * integrate_volume(f) + beta * integrate_volume(h);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(PartialDerivative, QuadraticFirstDerivative) {
  const PhaseSpaceGrid g(2.0, 41, 2.0, 41);
  const auto f = ScalarField::from_function(g, [](double x, double) { return x * x; });
  const ScalarField d = partial_derivative(f, Axis::x, 1);
  const std::size_t m = stencil_half_width(1);
  double worst = 0.0;
  for (std::size_t i = m; i + m < g.n_x(); ++i)
    for (std::size_t j = 0; j < g.n_k(); ++j) worst = std::max(worst, std::abs(d(i, j) - 2.0 * g.x(i)));
  EXPECT_LT(worst, 1e-10);
}

double sine_second_derivative_error(std::size_t n) {
  const PhaseSpaceGrid g(kPi, n, 1.0, 16);
  const auto f = ScalarField::from_function(g, [](double x, double) { return std::sin(x); });
  const ScalarField d = partial_derivative(f, Axis::x, 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n_x(); ++i)
    if (std::abs(g.x(i)) <= 2.0) worst = std::max(worst, std::abs(d(i, 5) + std::sin(g.x(i))));
  return worst;
}

TEST(PartialDerivative, SineSecondDerivativeFourthOrder) {
  const double coarse = sine_second_derivative_error(65);
  const double fine = sine_second_derivative_error(129);
  const double ratio = coarse / fine;
  EXPECT_GT(ratio, 16.0 * 0.75) << coarse << " " << fine;
  EXPECT_LT(ratio, 16.0 * 1.25) << coarse << " " << fine;
}

TEST(PartialDerivative, ConvergenceAllOrdersAlongK) {
  // exp(-k^2) decays inside the box, so the zero extension is harmless.
  for (int order = 1; order <= 4; ++order) {
    double errors[2];
    const std::size_t sizes[2] = {81, 161};
    for (int level = 0; level < 2; ++level) {
      const PhaseSpaceGrid g(1.0, 16, 8.0, sizes[level]);
      const auto f = ScalarField::from_function(g, [](double, double k) { return std::exp(-k * k); });
      const ScalarField d = partial_derivative(f, Axis::k, order);
      const auto exact = [order](double k) {
        const double e = std::exp(-k * k);
        switch (order) {
          case 1: return -2.0 * k * e;
          case 2: return (4.0 * k * k - 2.0) * e;
          case 3: return (-8.0 * k * k * k + 12.0 * k) * e;
          default: return (16.0 * k * k * k * k - 48.0 * k * k + 12.0) * e;
        }
      };
      double worst = 0.0;
      for (std::size_t j = 0; j < g.n_k(); ++j)
        worst = std::max(worst, std::abs(d(3, j) - exact(g.k(j))));
      errors[level] = worst;
    }
    const double ratio = errors[0] / errors[1];
    EXPECT_GT(ratio, 12.0) << "order " << order;
    EXPECT_LT(ratio, 20.0) << "order " << order;
  }
}

TEST(PartialDerivative, ConstantGivesZeroInInterior) {
  const PhaseSpaceGrid g(2.0, 32, 3.0, 48);
  const ScalarField f(g, 2.5);
  for (Axis axis : {Axis::x, Axis::k}) {
    for (int order = 1; order <= kMaxDerivativeOrder; ++order) {
      const ScalarField d = partial_derivative(f, axis, order);
      const std::size_t m = stencil_half_width(order);
      for (std::size_t i = m; i + m < g.n_x(); ++i)
        for (std::size_t j = m; j + m < g.n_k(); ++j)
          ASSERT_NEAR(d(i, j), 0.0, 1e-9 * std::pow(g.h_x(), -order)) << order;
    }
  }
}

TEST(PartialDerivative, RejectsUnsupportedOrder) {
  const ScalarField f(PhaseSpaceGrid(1.0, 32, 1.0, 32), 1.0);
  EXPECT_EQ(kind_of([&] { (void)partial_derivative(f, Axis::x, kMaxDerivativeOrder + 1); }),
            ErrorKind::numerical);
  EXPECT_EQ(kind_of([&] { (void)partial_derivative(f, Axis::k, 0); }), ErrorKind::numerical);
}

TEST(PartialDerivative, Linearity) {
  const PhaseSpaceGrid g(2.0, 40, 2.0, 36);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField f = testing::random_field(g, rng);
    const ScalarField h = testing::random_field(g, rng);
    ScalarField sum(g);
    for (std::size_t n = 0; n < g.size(); ++n) sum.values()[n] = 2.0 * f.values()[n] - h.values()[n];
    for (Axis axis : {Axis::x, Axis::k}) {
      const ScalarField ds = partial_derivative(sum, axis, 2);
      const ScalarField df = partial_derivative(f, axis, 2);
      const ScalarField dh = partial_derivative(h, axis, 2);
      for (std::size_t n = 0; n < g.size(); ++n) {
        const double rhs = 2.0 * df.values()[n] - dh.values()[n];
        ASSERT_NEAR(ds.values()[n], rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST(CentralStencil, WeightsAnnihilateLowerPowers) {
  for (int order = 1; order <= kMaxDerivativeOrder; ++order) {
    const auto w = central_stencil(order);
    const auto half = static_cast<int>(w.size() / 2);
    ASSERT_EQ(w.size() % 2, 1u);
    for (int p = 0; p < order; ++p) {
      double s = 0.0;
      for (int m = -half; m <= half; ++m) s += w[m + half] * std::pow(m, p);
      EXPECT_NEAR(s, 0.0, 1e-9) << "order " << order << " power " << p;
    }
    double s = 0.0;
    double fact = 1.0;
    for (int i = 2; i <= order; ++i) fact *= i;
    for (int m = -half; m <= half; ++m) s += w[m + half] * std::pow(m, order);
    EXPECT_NEAR(s / fact, 1.0, 1e-9) << "order " << order;
  }
}

TEST(NodeMask, SetCountMatch) {
  const PhaseSpaceGrid g(1.0, 16, 1.0, 20);
  NodeMask m(g, false);
  m.set(1, 2, true);
  m.set(15, 19, true);
  EXPECT_TRUE(m(1, 2));
  EXPECT_FALSE(m(2, 1));
  EXPECT_EQ(m.count(), 2u);
  EXPECT_TRUE(m.matches(g));
  EXPECT_FALSE(m.matches(PhaseSpaceGrid(1.0, 20, 1.0, 16)));
}

}  // namespace
}  // namespace wigflux
