#include <doctest.h>

#include <cmath>
#include <random>

#include "shortdot/errors.hpp"
#include "shortdot/poly.hpp"

using shortdot::poly::eval_many;
using shortdot::poly::interpolate;
using shortdot::poly::Polynomial;

namespace {

// sum_k c_k h^(deg - k), each power computed with std::pow.
double power_sum(const std::vector<double>& c, double h) {
  long double acc = 0.0L;
  const auto deg = static_cast<int>(c.size()) - 1;
  for (int k = 0; k <= deg; ++k) acc += static_cast<long double>(c[static_cast<std::size_t>(k)]) * std::pow(static_cast<long double>(h), deg - k);
  return static_cast<double>(acc);
}

}  // namespace

TEST_CASE("eval_many") {
  const std::vector<double> pts{0, 5, -3};
  CHECK(eval_many(Polynomial({1.0}), pts) == std::vector<double>{1, 1, 1});
  const std::vector<double> pts2{2, 3};
  CHECK(eval_many(Polynomial({1.0, 0.0}), pts2) == std::vector<double>{2, 3});
  CHECK_THROWS_AS(Polynomial({}), shortdot::ValidationError);

  std::mt19937_64 gen(2);
  std::normal_distribution<double> dist;
  std::vector<double> c(8);
  for (auto& v : c) v = dist(gen);
  std::vector<double> points(10);
  for (auto& v : points) v = 2.0 * dist(gen);
  const auto got = eval_many(Polynomial(c), points);
  for (std::size_t t = 0; t < points.size(); ++t) {
    const double want = power_sum(c, points[t]);
    CHECK(std::fabs(got[t] - want) <= 1e-12 * std::max(1.0, std::fabs(want)) * 10.0);
  }
}

TEST_CASE("interpolate") {
  const std::vector<double> pts{0, 1};
  const std::vector<double> vals{1, 2};
  const auto p = interpolate(pts, vals);
  REQUIRE(p.coefficients().size() == 2);
  CHECK(p.coefficients()[0] == doctest::Approx(1.0));
  CHECK(p.coefficients()[1] == doctest::Approx(1.0));

  const std::vector<double> one{4.0};
  const std::vector<double> v1{-2.5};
  const auto c = interpolate(one, v1);
  CHECK(c.degree() == 0);
  CHECK(c.coefficients()[0] == -2.5);

  const std::vector<double> dup{1, 2, 1};
  const std::vector<double> dv{0, 0, 0};
  CHECK_THROWS_AS(interpolate(dup, dv), shortdot::ValidationError);
  const std::vector<double> short_vals{0, 0};
  CHECK_THROWS_AS(interpolate(dup, short_vals), shortdot::ValidationError);

  std::mt19937_64 gen(9);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> coef(6);
    for (auto& v : coef) v = dist(gen);
    std::vector<double> nodes(6);
    for (std::size_t i = 0; i < 6; ++i) nodes[i] = std::cos((2.0 * static_cast<double>(i) + 1.0) * M_PI / 12.0);
    const auto back = interpolate(nodes, eval_many(Polynomial(coef), nodes));
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < 6; ++k) {
      err = std::max(err, std::fabs(back.coefficients()[k] - coef[k]));
      scale = std::max(scale, std::fabs(coef[k]));
    }
    CHECK(err <= 1e-8 * scale);
  }
}
