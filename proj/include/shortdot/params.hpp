#pragma once

#include <cstddef>

namespace shortdot {

/// Shape of a Short-Dot code: P processors, any K of which suffice to recover
/// M dot products of (padded) length N. N is the smallest multiple of P that
/// is >= n_raw, the caller's original input dimension.
struct CodeParams {
  std::size_t P = 0;
  std::size_t K = 0;
  std::size_t M = 0;
  std::size_t N = 0;
  std::size_t n_raw = 0;

  /// Per-row sparsity budget (N/P)(P-K+M); also the worker dot-product length.
  [[nodiscard]] std::size_t sparsity() const { return (N / P) * (P - K + M); }
  /// Number of enforced zeros per column of F.
  [[nodiscard]] std::size_t zeros_per_column() const { return K - M; }

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

/// Checks 1 <= M <= K <= P and n_raw >= 1, then pads n_raw up to a multiple
/// of P. Throws ValidationError otherwise.
CodeParams validate_params(std::size_t P, std::size_t K, std::size_t M, std::size_t n_raw);

}  // namespace shortdot
