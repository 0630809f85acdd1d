#pragma once

#include <span>
#include <vector>

namespace shortdot::poly {

/// Real polynomial, coefficients highest degree first (the column order of a
/// Vandermonde generator). Never empty.
class Polynomial {
 public:
  explicit Polynomial(std::vector<double> coefficients);

  [[nodiscard]] const std::vector<double>& coefficients() const { return coefficients_; }
  [[nodiscard]] std::size_t degree() const { return coefficients_.size() - 1; }

  /// Horner evaluation.
  [[nodiscard]] double operator()(double point) const;

 private:
  std::vector<double> coefficients_;
};

std::vector<double> eval_many(const Polynomial& p, std::span<const double> points);

/// Degree D-1 interpolant through D distinct points, via Newton divided
/// differences converted to monomial form. Throws ValidationError on
/// duplicate points and NumericalError when the interpolant misses the data
/// by more than 1e-8 relative.
Polynomial interpolate(std::span<const double> points, std::span<const double> values);

}  // namespace shortdot::poly
