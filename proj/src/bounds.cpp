#include "shortdot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shortdot/errors.hpp"

namespace shortdot::bounds {

namespace {

void check_shape(std::size_t P, std::size_t K, std::size_t M) {
  if (M == 0 || M > K || K > P) throw ValidationError("bounds need 1 <= M <= K <= P");
}

}  // namespace

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::size_t i = 0; i < k; ++i) {
    result *= n - i;
    result /= i + 1;
  }
  return result;
}

double basic_lower_bound(double N, std::size_t P, std::size_t K) {
  if (P == 0 || K == 0 || K > P) throw ValidationError("basic bound needs 1 <= K <= P");
  return N / static_cast<double>(P) * static_cast<double>(P - K + 1);
}

Rational tight_bound_gap(std::size_t P, std::size_t K, std::size_t M) {
  check_shape(P, K, M);
  return Rational(BigInt(M) * M * binomial(P, K - M + 1), BigInt(P));
}

Rational tight_lower_bound_exact(std::size_t N, std::size_t P, std::size_t K, std::size_t M) {
  check_shape(P, K, M);
  if (M <= 1) throw ValidationError("tight bound needs M > 1; use basic_lower_bound for M = 1");
  const Rational budget(BigInt(N) * (P - K + M), BigInt(P));
  return budget - tight_bound_gap(P, K, M);
}

double tight_lower_bound(std::size_t N, std::size_t P, std::size_t K, std::size_t M) {
  return tight_lower_bound_exact(N, P, K, M).convert_to<double>();
}

BigInt lambda_cap(std::size_t P, std::size_t K, std::size_t M) {
  check_shape(P, K, M);
  return BigInt(M) * binomial(P, K - M + 1);
}

BoundReport check_achievability(const EncodedTransform& code) {
  const auto& p = code.params;
  check_shape(p.P, p.K, p.M);
  const auto P = static_cast<Eigen::Index>(p.P);
  const auto measured = static_cast<Eigen::Index>(std::min(p.n_raw, p.N));
  if (code.F.rows() != P || code.F.cols() < measured) {
    throw ValidationError("F does not match the code parameters");
  }

  BoundReport r;
  r.measured_columns = static_cast<std::size_t>(measured);
  r.budget = p.sparsity();
  r.lambda_cap = lambda_cap(p.P, p.K, p.M);
  r.gap_ratio = (BigInt(p.M) * p.M * binomial(p.P, p.K - p.M + 1)).convert_to<double>() /
                static_cast<double>(p.N);
  r.asymptotic_condition_met = r.gap_ratio < 0.01;

  auto nonzero = [&](Eigen::Index i, Eigen::Index j) { return std::abs(code.F(i, j)) > code.zero_tolerance; };

  std::size_t total_nonzeros = 0;
  for (Eigen::Index i = 0; i < P; ++i) {
    std::size_t row = 0;
    for (Eigen::Index j = 0; j < measured; ++j) row += nonzero(i, j) ? 1 : 0;
    total_nonzeros += row;
    r.achieved_max_sparsity = std::max(r.achieved_max_sparsity, row);
  }
  std::size_t total_zeros = 0;
  std::size_t empty_columns = 0;
  for (Eigen::Index j = 0; j < measured; ++j) {
    std::size_t zeros = 0;
    for (Eigen::Index i = 0; i < P; ++i) zeros += nonzero(i, j) ? 0 : 1;
    total_zeros += zeros;
    r.max_column_zeros = std::max(r.max_column_zeros, zeros);
    if (zeros == p.P) ++empty_columns;
  }
  r.achieved_avg_sparsity = static_cast<double>(total_nonzeros) / static_cast<double>(P);
  r.avg_column_zeros = measured > 0 ? static_cast<double>(total_zeros) / static_cast<double>(measured) : 0.0;

  r.basic_bound = basic_lower_bound(static_cast<double>(measured), p.P, p.K);
  r.tight_bound = p.M > 1 ? tight_lower_bound(static_cast<std::size_t>(measured), p.P, p.K, p.M) : r.basic_bound;

  if (empty_columns > 0) {
    r.hypothesis_holds = false;
    r.warnings.push_back(std::to_string(empty_columns) +
                         " unpadded column(s) of F are all zero; the lower bounds do not apply and are not asserted");
    return r;
  }
  if (r.achieved_max_sparsity > r.budget) {
    throw NumericalError("row of F has " + std::to_string(r.achieved_max_sparsity) +
                         " nonzeros, above the budget " + std::to_string(r.budget));
  }
  if (r.achieved_avg_sparsity < r.basic_bound * (1.0 - 1e-12)) {
    throw NumericalError("average row sparsity is below the basic lower bound");
  }
  if (r.max_column_zeros + 1 > p.K) {
    throw NumericalError("a column of F has " + std::to_string(r.max_column_zeros) +
                         " zeros, so some K rows cannot span A");
  }
  return r;
}

}  // namespace shortdot::bounds
