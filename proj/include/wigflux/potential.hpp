#pragma once

#include <string>
#include <vector>

namespace wigflux {

/// Dimensionless potential U(x) given as an even polynomial, with exact
/// derivatives of every order.
class PotentialModel {
 public:
  /// U = x^2/2
  static PotentialModel harmonic();
  /// U = x^2/2 + lambda x^4
  static PotentialModel quartic(double lambda);
  /// U = x^4/4
  static PotentialModel pure_quartic();
  /// U = -x^2/2 + lambda x^4
  static PotentialModel double_well(double lambda);

  /// coefficients[m] multiplies x^m. Rejects odd terms and a non-positive
  /// leading coefficient (unbounded motion).
  PotentialModel(std::string label, std::vector<double> coefficients);

  const std::string& label() const noexcept { return label_; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  /// Named parameter (e.g. lambda); 0 when the family has none.
  double parameter() const noexcept { return parameter_; }

  bool parity_even() const noexcept { return true; }
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
  bool is_harmonic() const noexcept;

  double value(double x) const noexcept;
  /// d^order U / dx^order; exactly 0.0 for order > degree().
  double derivative(double x, int order) const noexcept;
  /// True when the order-th derivative vanishes identically.
  bool derivative_vanishes(int order) const noexcept { return order > degree(); }

 private:
  std::string label_;
  std::vector<double> coefficients_;
  double parameter_ = 0.0;
};

}  // namespace wigflux
