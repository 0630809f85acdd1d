#include "shortdot/poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shortdot/errors.hpp"

namespace shortdot::poly {

namespace {

constexpr double kInterpolationResidual = 1e-8;

}  // namespace

Polynomial::Polynomial(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw ValidationError("polynomial needs at least one coefficient");
}

double Polynomial::operator()(double point) const {
  double acc = 0.0;
  for (double c : coefficients_) acc = acc * point + c;
  return acc;
}

std::vector<double> eval_many(const Polynomial& p, std::span<const double> points) {
  std::vector<double> out(points.size());
  std::transform(points.begin(), points.end(), out.begin(), [&](double h) { return p(h); });
  return out;
}

Polynomial interpolate(std::span<const double> points, std::span<const double> values) {
  const std::size_t n = points.size();
  if (n == 0) throw ValidationError("interpolation needs at least one point");
  if (values.size() != n) {
    throw ValidationError("interpolation got " + std::to_string(n) + " points but " +
                          std::to_string(values.size()) + " values");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (points[i] == points[j]) throw ValidationError("interpolation points must be distinct");
    }
  }

  // Divided differences in place: c[k] = f[x_0, ..., x_k].
  std::vector<double> c(values.begin(), values.end());
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      c[i] = (c[i] - c[i - 1]) / (points[i] - points[i - level]);
    }
  }

  // Nested multiplication: p <- p * (x - x_k) + c_k, highest degree first.
  std::vector<double> p{c[n - 1]};
  p.reserve(n);
  for (std::size_t k = n - 1; k-- > 0;) {
    p.push_back(0.0);
    for (std::size_t i = p.size() - 1; i > 0; --i) p[i] -= points[k] * p[i - 1];
    p.back() += c[k];
  }

  Polynomial result(std::move(p));
  double scale = 0.0;
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(values[i]));
    residual = std::max(residual, std::abs(result(points[i]) - values[i]));
  }
  if (!(residual <= kInterpolationResidual * scale)) {
    throw NumericalError("interpolation residual " + std::to_string(residual) +
                         " exceeds tolerance; points too ill-conditioned");
  }
  return result;
}

}  // namespace shortdot::poly
