#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wigflux {

enum class Axis { x, k };

/// Uniform node-centred discretization of the dimensionless phase space
/// (x, k). Always symmetric about the origin; x is the slow (row) index.
class PhaseSpaceGrid {
 public:
  static constexpr std::size_t kMinNodes = 16;

  PhaseSpaceGrid(double x_max, std::size_t n_x, double k_max, std::size_t n_k);

  double x_min() const noexcept { return -x_max_; }
  double x_max() const noexcept { return x_max_; }
  double k_min() const noexcept { return -k_max_; }
  double k_max() const noexcept { return k_max_; }
  std::size_t n_x() const noexcept { return n_x_; }
  std::size_t n_k() const noexcept { return n_k_; }
  double h_x() const noexcept { return h_x_; }
  double h_k() const noexcept { return h_k_; }
  std::size_t size() const noexcept { return n_x_ * n_k_; }

  double x(std::size_t i) const noexcept { return -x_max_ + static_cast<double>(i) * h_x_; }
  double k(std::size_t j) const noexcept { return -k_max_ + static_cast<double>(j) * h_k_; }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * n_k_ + j; }

  bool operator==(const PhaseSpaceGrid&) const = default;

 private:
  double x_max_;
  double k_max_;
  std::size_t n_x_;
  std::size_t n_k_;
  double h_x_;
  double h_k_;
};

/// Symmetric 1-D grid carrying wavefunction samples. The node count is a
/// power of two so the propagator can use radix-2 transforms.
class CoordinateGrid {
 public:
  CoordinateGrid(double x_max, std::size_t n);

  double x_min() const noexcept { return -x_max_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  double x(std::size_t i) const noexcept { return -x_max_ + static_cast<double>(i) * h_; }

  bool operator==(const CoordinateGrid&) const = default;

 private:
  double x_max_;
  std::size_t n_;
  double h_;
};

/// The coordinate grid that shares the phase-space grid's x nodes.
CoordinateGrid coordinate_axis(const PhaseSpaceGrid& grid);

/// Conversion between dimensional (q, p, t) and dimensionless (x, k, tau)
/// variables for a mass scale m, frequency scale omega and action scale hbar.
struct DimensionlessMap {
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;

  /// Throws a config error unless all three scales are strictly positive.
  void validate() const;

  double to_x(double q) const;
  double to_k(double p) const;
  double to_tau(double t) const { return omega * t; }
  double to_q(double x) const;
  double to_p(double k) const;
  double to_t(double tau) const { return tau / omega; }

  /// Field scalings: W_dimless = sqrt(m omega hbar) W, J_x = m J_q,
  /// J_k = J_p / omega.
  double wigner_to_dimensionless(double w) const;
  double current_q_to_x(double j_q) const { return m * j_q; }
  double current_p_to_k(double j_p) const { return j_p / omega; }
};

/// Real samples on a phase-space grid, stored row-major in (x, k).
class ScalarField {
 public:
  explicit ScalarField(PhaseSpaceGrid grid, double fill = 0.0);
  ScalarField(PhaseSpaceGrid grid, std::vector<double> values);

  template <class F>
  static ScalarField from_function(const PhaseSpaceGrid& grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid.n_x(); ++i)
      for (std::size_t j = 0; j < grid.n_k(); ++j) out(i, j) = f(grid.x(i), grid.k(j));
    return out;
  }

  const PhaseSpaceGrid& grid() const noexcept { return grid_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[grid_.index(i, j)]; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[grid_.index(i, j)];
  }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Largest absolute value over all nodes.
  double max_abs() const noexcept;

 private:
  PhaseSpaceGrid grid_;
  std::vector<double> values_;
};

/// Boolean selection of grid nodes.
class NodeMask {
 public:
  NodeMask(const PhaseSpaceGrid& grid, bool fill);

  std::size_t n_x() const noexcept { return n_x_; }
  std::size_t n_k() const noexcept { return n_k_; }
  bool operator()(std::size_t i, std::size_t j) const noexcept { return bits_[i * n_k_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool on) noexcept { bits_[i * n_k_ + j] = on ? 1 : 0; }
  std::size_t count() const noexcept;
  bool matches(const PhaseSpaceGrid& grid) const noexcept {
    return grid.n_x() == n_x_ && grid.n_k() == n_k_;
  }

 private:
  std::size_t n_x_;
  std::size_t n_k_;
  std::vector<std::uint8_t> bits_;
};

/// 2-D trapezoidal quadrature of the field, over the nodes selected by
/// `region` when given. Summation is compensated and in fixed node order.
double integrate_volume(const ScalarField& field, const NodeMask* region = nullptr);

/// Highest derivative order the stencil tables support.
inline constexpr int kMaxDerivativeOrder = 8;

/// Fourth-order central finite-difference weights for the given derivative
/// order, indexed from offset -half_width to +half_width (unscaled by h).
std::span<const double> central_stencil(int order);

/// Central-difference derivative along one axis. Values beyond the grid edge
/// are taken as zero.
ScalarField partial_derivative(const ScalarField& field, Axis axis, int order);

/// Nodes whose stencil does not reach past the edge for the given order.
std::size_t stencil_half_width(int order);

}  // namespace wigflux
