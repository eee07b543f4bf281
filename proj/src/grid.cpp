#include "wigflux/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "wigflux/error.hpp"

namespace wigflux {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      carry_ += (sum_ - t) + v;
    else
      carry_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Fornberg's recursion for finite-difference weights on integer offsets
// -p..p; returns the row for derivative `order`.
std::vector<double> fornberg_weights(int order, int half_width) {
  const int n = 2 * half_width + 1;
  std::vector<std::vector<long double>> c(n, std::vector<long double>(order + 1, 0.0L));
  auto node = [&](int i) { return static_cast<long double>(i - half_width); };
  long double c1 = 1.0L;
  long double c4 = node(0);
  c[0][0] = 1.0L;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    long double c2 = 1.0L;
    const long double c5 = c4;
    c4 = node(i);
    for (int j = 0; j < i; ++j) {
      const long double c3 = node(i) - node(j);
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m)
          c[i][m] = c1 * (static_cast<long double>(m) * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int m = mn; m >= 1; --m)
        c[j][m] = (c4 * c[j][m] - static_cast<long double>(m) * c[j][m - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = static_cast<double>(c[i][order]);
  return w;
}

const std::array<std::vector<double>, kMaxDerivativeOrder + 1>& stencil_table() {
  static const auto table = [] {
    std::array<std::vector<double>, kMaxDerivativeOrder + 1> t;
    for (int order = 1; order <= kMaxDerivativeOrder; ++order)
      t[order] = fornberg_weights(order, static_cast<int>(stencil_half_width(order)));
    return t;
  }();
  return table;
}

}  // namespace

PhaseSpaceGrid::PhaseSpaceGrid(double x_max, std::size_t n_x, double k_max, std::size_t n_k)
    : x_max_(x_max), k_max_(k_max), n_x_(n_x), n_k_(n_k) {
  if (!(x_max > 0.0) || !(k_max > 0.0) || !std::isfinite(x_max) || !std::isfinite(k_max))
    reject_config("grid.PhaseSpaceGrid", "extents must be finite and positive, got x_max=", x_max,
                  " k_max=", k_max);
  if (n_x < kMinNodes || n_k < kMinNodes)
    reject_config("grid.PhaseSpaceGrid", "need at least ", kMinNodes, " nodes per axis, got n_x=",
                  n_x, " n_k=", n_k);
  h_x_ = 2.0 * x_max / static_cast<double>(n_x - 1);
  h_k_ = 2.0 * k_max / static_cast<double>(n_k - 1);
}

CoordinateGrid::CoordinateGrid(double x_max, std::size_t n) : x_max_(x_max), n_(n) {
  if (!(x_max > 0.0) || !std::isfinite(x_max))
    reject_config("grid.CoordinateGrid", "extent must be finite and positive, got ", x_max);
  if (!is_power_of_two(n) || n < PhaseSpaceGrid::kMinNodes)
    reject_config("grid.CoordinateGrid", "node count must be a power of two >= 16, got ", n);
  h_ = 2.0 * x_max / static_cast<double>(n - 1);
}

CoordinateGrid coordinate_axis(const PhaseSpaceGrid& grid) {
  return CoordinateGrid(grid.x_max(), grid.n_x());
}

void DimensionlessMap::validate() const {
  if (!(m > 0.0) || !(omega > 0.0) || !(hbar > 0.0) || !std::isfinite(m) ||
      !std::isfinite(omega) || !std::isfinite(hbar))
    reject_config("grid.DimensionlessMap", "scales must be finite and positive, got m=", m,
                  " omega=", omega, " hbar=", hbar);
}

double DimensionlessMap::to_x(double q) const { return std::sqrt(m * omega / hbar) * q; }
double DimensionlessMap::to_k(double p) const { return p / std::sqrt(m * omega * hbar); }
double DimensionlessMap::to_q(double x) const { return x / std::sqrt(m * omega / hbar); }
double DimensionlessMap::to_p(double k) const { return k * std::sqrt(m * omega * hbar); }
double DimensionlessMap::wigner_to_dimensionless(double w) const {
  return std::sqrt(m * omega * hbar) * w;
}

ScalarField::ScalarField(PhaseSpaceGrid grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(PhaseSpaceGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    reject_config("grid.ScalarField", "expected ", grid_.size(), " samples, got ", values_.size());
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

NodeMask::NodeMask(const PhaseSpaceGrid& grid, bool fill)
    : n_x_(grid.n_x()), n_k_(grid.n_k()), bits_(grid.size(), fill ? 1 : 0) {}

std::size_t NodeMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double integrate_volume(const ScalarField& field, const NodeMask* region) {
  const PhaseSpaceGrid& g = field.grid();
  if (region != nullptr && !region->matches(g))
    reject_config("grid.integrate_volume", "region mask does not match the field grid");
  CompensatedSum sum;
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    const double wx = (i == 0 || i + 1 == g.n_x()) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < g.n_k(); ++j) {
      const double v = field(i, j);
      if (!std::isfinite(v))
        reject_numerical("grid.integrate_volume", "non-finite value ", v, " at node (", i, ", ", j,
                         ") x=", g.x(i), " k=", g.k(j));
      if (region != nullptr && !(*region)(i, j)) continue;
      const double wk = (j == 0 || j + 1 == g.n_k()) ? 0.5 : 1.0;
      sum.add(wx * wk * v);
    }
  }
  return sum.value() * g.h_x() * g.h_k();
}

std::size_t stencil_half_width(int order) {
  return static_cast<std::size_t>((order + 1) / 2 + 1);
}

std::span<const double> central_stencil(int order) {
  if (order < 1 || order > kMaxDerivativeOrder)
    reject_numerical("grid.partial_derivative", "derivative order ", order,
                     " outside supported range [1, ", kMaxDerivativeOrder, "]");
  return stencil_table()[static_cast<std::size_t>(order)];
}

ScalarField partial_derivative(const ScalarField& field, Axis axis, int order) {
  const std::span<const double> weights = central_stencil(order);
  const PhaseSpaceGrid& g = field.grid();
  const auto half = static_cast<std::ptrdiff_t>(stencil_half_width(order));
  const std::size_t n_axis = axis == Axis::x ? g.n_x() : g.n_k();
  if (n_axis < static_cast<std::size_t>(2 * half + 1))
    reject_numerical("grid.partial_derivative", "axis has ", n_axis, " nodes, stencil needs ",
                     2 * half + 1);
  const double h = axis == Axis::x ? g.h_x() : g.h_k();
  const double scale = 1.0 / std::pow(h, order);

  ScalarField out(g);
  const auto nx = static_cast<std::ptrdiff_t>(g.n_x());
  const auto nk = static_cast<std::ptrdiff_t>(g.n_k());
  if (axis == Axis::x) {
    for (std::ptrdiff_t i = 0; i < nx; ++i) {
      for (std::ptrdiff_t s = -half; s <= half; ++s) {
        const std::ptrdiff_t src = i + s;
        const double w = weights[static_cast<std::size_t>(s + half)];
        if (src < 0 || src >= nx || w == 0.0) continue;
        for (std::ptrdiff_t j = 0; j < nk; ++j)
          out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +=
              w * field(static_cast<std::size_t>(src), static_cast<std::size_t>(j));
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < nx; ++i) {
      for (std::ptrdiff_t j = 0; j < nk; ++j) {
        double acc = 0.0;
        for (std::ptrdiff_t s = -half; s <= half; ++s) {
          const std::ptrdiff_t src = j + s;
          if (src < 0 || src >= nk) continue;
          acc += weights[static_cast<std::size_t>(s + half)] *
                 field(static_cast<std::size_t>(i), static_cast<std::size_t>(src));
        }
        out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = acc;
      }
    }
  }
  for (double& v : out.values()) v *= scale;
  return out;
}

}  // namespace wigflux
