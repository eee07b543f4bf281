#include "wigflux/potential.hpp"

#include <cmath>
#include <utility>

#include "wigflux/error.hpp"

namespace wigflux {

PotentialModel PotentialModel::harmonic() { return PotentialModel("harmonic", {0.0, 0.0, 0.5}); }

PotentialModel PotentialModel::quartic(double lambda) {
  if (!(lambda > 0.0))
    reject_config("currents.PotentialModel", "quartic lambda must be positive, got ", lambda);
  PotentialModel p("quartic", {0.0, 0.0, 0.5, 0.0, lambda});
  p.parameter_ = lambda;
  return p;
}

PotentialModel PotentialModel::pure_quartic() {
  return PotentialModel("pure_quartic", {0.0, 0.0, 0.0, 0.0, 0.25});
}

PotentialModel PotentialModel::double_well(double lambda) {
  if (!(lambda > 0.0))
    reject_config("currents.PotentialModel", "double-well lambda must be positive, got ", lambda);
  PotentialModel p("double_well", {0.0, 0.0, -0.5, 0.0, lambda});
  p.parameter_ = lambda;
  return p;
}

PotentialModel::PotentialModel(std::string label, std::vector<double> coefficients)
    : label_(std::move(label)), coefficients_(std::move(coefficients)) {
  while (!coefficients_.empty() && coefficients_.back() == 0.0) coefficients_.pop_back();
  if (coefficients_.empty())
    reject_config("currents.PotentialModel", "potential '", label_, "' is identically zero");
  for (std::size_t m = 0; m < coefficients_.size(); ++m) {
    if (!std::isfinite(coefficients_[m]))
      reject_config("currents.PotentialModel", "non-finite coefficient of x^", m);
    if (m % 2 == 1 && coefficients_[m] != 0.0)
      reject_config("currents.PotentialModel", "potential '", label_,
                    "' must be parity-even, x^", m, " has coefficient ", coefficients_[m]);
  }
  if (degree() < 2 || !(coefficients_.back() > 0.0))
    reject_config("currents.PotentialModel", "potential '", label_,
                  "' must confine: leading coefficient of an even degree >= 2 must be positive");
}

bool PotentialModel::is_harmonic() const noexcept {
  return coefficients_.size() == 3 && coefficients_[1] == 0.0 && coefficients_[2] > 0.0;
}

double PotentialModel::value(double x) const noexcept { return derivative(x, 0); }

double PotentialModel::derivative(double x, int order) const noexcept {
  if (order > degree()) return 0.0;
  // Horner on the differentiated coefficients.
  double acc = 0.0;
  for (int m = degree(); m >= order; --m) {
    double falling = 1.0;
    for (int r = 0; r < order; ++r) falling *= static_cast<double>(m - r);
    acc = acc * x + falling * coefficients_[static_cast<std::size_t>(m)];
  }
  return acc;
}

}  // namespace wigflux
