#pragma once

// Reference computations used only by the tests. Each one is written from
// the defining formula, without calling into the library under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline Eigen::MatrixXd random_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(gen);
  }
  return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& gen, Eigen::Index n) {
  return random_matrix(gen, n, 1).col(0);
}

/// Triple-loop-free but explicit A x, accumulated in long double.
inline Eigen::VectorXd matvec(const Eigen::MatrixXd& A, const Eigen::VectorXd& x) {
  Eigen::VectorXd y(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    long double acc = 0.0L;
    for (Eigen::Index j = 0; j < A.cols(); ++j) acc += static_cast<long double>(A(i, j)) * x(j);
    y(i) = static_cast<double>(acc);
  }
  return y;
}

inline double rel_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  const double scale = std::max(want.norm(), 1e-300);
  return (got - want).norm() / scale;
}

/// Determinant by Gaussian elimination with full pivoting in long double.
inline long double determinant(Eigen::MatrixXd m) {
  const Eigen::Index n = m.rows();
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a[i][j] = m(i, j);
  }
  long double det = 1.0L;
  std::vector<Eigen::Index> col(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pr = k, pc = k;
    for (Eigen::Index i = k; i < n; ++i) {
      for (Eigen::Index j = k; j < n; ++j) {
        if (std::fabs(a[i][j]) > std::fabs(a[pr][pc])) pr = i, pc = j;
      }
    }
    if (a[pr][pc] == 0.0L) return 0.0L;
    if (pr != k) std::swap(a[pr], a[k]), det = -det;
    if (pc != k) {
      for (auto& row : a) std::swap(row[pc], row[k]);
      det = -det;
    }
    det *= a[k][k];
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const long double f = a[i][k] / a[k][k];
      for (Eigen::Index j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

/// Gauss-Jordan solve in long double with partial pivoting.
inline Eigen::VectorXd solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& b) {
  const Eigen::Index n = m.rows();
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a[i][j] = m(i, j);
    a[i][n] = b(i);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
    }
    std::swap(a[p], a[k]);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k) continue;
      const long double f = a[i][k] / a[k][k];
      for (Eigen::Index j = k; j <= n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = static_cast<double>(a[i][n] / a[i][i]);
  return x;
}

/// sum_{i=0}^{K-1} 1 / (P - i): the expected K-th order statistic of P
/// iid Exp(1) variables (Renyi representation).
inline long double exp_order_statistic(std::size_t P, std::size_t K) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < K; ++i) acc += 1.0L / static_cast<long double>(P - i);
  return acc;
}

/// Composite Simpson rule of 1 - F on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  long double acc = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) acc += (i % 2 ? 4.0L : 2.0L) * f(a + h * static_cast<double>(i));
  return static_cast<double>(acc * h / 3.0L);
}

/// Calls fn on every subset (as a membership mask) of {0..n-1} with exactly k
/// members.
inline void each_mask(std::size_t n, std::size_t k, const std::function<void(const std::vector<bool>&)>& fn) {
  std::vector<bool> mask(n, false);
  std::fill(mask.end() - static_cast<std::ptrdiff_t>(k), mask.end(), true);
  do {
    fn(mask);
  } while (std::next_permutation(mask.begin(), mask.end()));
}

}  // namespace oracle
