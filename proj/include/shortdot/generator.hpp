#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "shortdot/params.hpp"

namespace shortdot {

/// Largest estimated condition number any solve may have before it is
/// rejected with NumericalError.
inline constexpr double kMaxCondition = 1e12;

enum class GeneratorKind { Vandermonde, Gaussian };

std::string_view to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view name);

/// P x K matrix B with the relaxed invertibility property: every K x K row
/// subset is invertible, and every (K-M) x (K-M) row subset of the trailing
/// K-M columns is invertible.
///
/// Vandermonde rows are [h^(K-1), ..., h, 1]; `nodes` holds h_1..h_P.
/// Gaussian entries are drawn from the counter-based stream keyed by `seed`,
/// so the same seed reproduces the same matrix on every platform.
struct GeneratorMatrix {
  GeneratorKind kind = GeneratorKind::Vandermonde;
  Eigen::MatrixXd entries;
  std::vector<double> nodes;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t rows() const { return static_cast<std::size_t>(entries.rows()); }
  [[nodiscard]] std::size_t cols() const { return static_cast<std::size_t>(entries.cols()); }
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Vandermonde;
  std::optional<std::vector<double>> nodes;  // Vandermonde; default: Chebyshev nodes
  std::uint64_t seed = 0;                    // Gaussian
};

/// cos((2i-1) pi / (2P)), i = 1..P. Pairwise distinct for every P.
std::vector<double> chebyshev_nodes(std::size_t P);

GeneratorMatrix vandermonde_generator(std::span<const double> nodes, std::size_t K);
GeneratorMatrix gaussian_generator(std::size_t P, std::size_t K, std::uint64_t seed);

/// Builds B for `params`. Throws ValidationError on duplicate or wrongly
/// sized nodes. When the number of submatrices to inspect is small the
/// relaxed invertibility property is checked and NumericalError is thrown if
/// any of them exceeds kMaxCondition.
GeneratorMatrix build_generator(const CodeParams& params, const GeneratorSpec& spec);

struct GeneratorCheck {
  bool ok = true;
  double worst_condition = 0.0;
  std::size_t submatrices = 0;
};

/// Exhaustively checks every K x K row subset and every (K-M) x (K-M) row
/// subset of the trailing K-M columns. Cost is C(P,K) + C(P,K-M) LU
/// factorizations; meant for small P.
GeneratorCheck check_generator(const GeneratorMatrix& generator, std::size_t M,
                               double max_condition = kMaxCondition);

/// Rows of B (in the given order) as a dense matrix.
Eigen::MatrixXd select_rows(const Eigen::MatrixXd& matrix, std::span<const std::size_t> rows);

}  // namespace shortdot
