#pragma once

// Lower bounds on the average row sparsity of any F whose every K rows span
// the M rows of A, and a measurement of how close a constructed code gets.

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "shortdot/coding.hpp"

namespace shortdot::bounds {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt binomial(std::size_t n, std::size_t k);

/// (N/P)(P - K + 1).
double basic_lower_bound(double N, std::size_t P, std::size_t K);

/// (N/P)(P-K+M) - (M^2/P) C(P, K-M+1), exactly. Requires M > 1; may be
/// negative (vacuous) for small N.
Rational tight_lower_bound_exact(std::size_t N, std::size_t P, std::size_t K, std::size_t M);
double tight_lower_bound(std::size_t N, std::size_t P, std::size_t K, std::size_t M);

/// (M^2/P) C(P, K-M+1): distance between the Short-Dot budget and the tight
/// bound, independent of N.
Rational tight_bound_gap(std::size_t P, std::size_t K, std::size_t M);

/// M C(P, K-M+1): strict upper bound on the number of columns of F with more
/// than K-M zeros.
BigInt lambda_cap(std::size_t P, std::size_t K, std::size_t M);

struct BoundReport {
  double basic_bound = 0.0;
  double tight_bound = 0.0;              // equals basic_bound when M = 1
  std::size_t budget = 0;                // (N/P)(P-K+M), over measured columns
  double achieved_avg_sparsity = 0.0;
  std::size_t achieved_max_sparsity = 0;
  std::size_t max_column_zeros = 0;
  double avg_column_zeros = 0.0;
  std::size_t measured_columns = 0;      // unpadded columns
  BigInt lambda_cap = 0;
  double gap_ratio = 0.0;                // M^2 C(P, K-M+1) / N
  bool asymptotic_condition_met = false; // gap_ratio < 0.01
  bool hypothesis_holds = true;          // no all-zero unpadded column
  std::vector<std::string> warnings;
};

/// Measures F over its unpadded columns (entries with magnitude above the
/// code's zero tolerance count as nonzero). When every measured column has a
/// nonzero entry, throws NumericalError if the basic bound or the sparsity
/// budget is violated; otherwise records a warning and asserts nothing.
BoundReport check_achievability(const EncodedTransform& code);

}  // namespace shortdot::bounds
