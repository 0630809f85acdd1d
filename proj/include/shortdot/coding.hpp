#pragma once

// Short-Dot encoder, worker computation and fusion-node decoders.
//
// All indices in this interface are 0-based: rows of F are processors
// 0..P-1, columns are 0..N-1. File formats and the CLI use 1-based indices.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "shortdot/generator.hpp"
#include "shortdot/params.hpp"

namespace shortdot {

/// Relative scale of the magnitude below which an entry of F counts as an
/// enforced zero: zero_tolerance = kZeroToleranceScale * max|A|.
inline constexpr double kZeroToleranceScale = 1e-9;
/// Decode residual bound: ||B^V w - v|| <= kDecodeResidual * ||v||.
inline constexpr double kDecodeResidual = 1e-8;
/// An output "matches" a candidate decode within this * (1 + |output|).
inline constexpr double kErrorMatchTolerance = 1e-6;

/// Encoded matrix F (P x N, padded) together with the generator it was built
/// with. supports[i] lists the columns row i may use. Entries of F at
/// enforced-zero positions are stored as exact zeros.
struct EncodedTransform {
  CodeParams params;
  GeneratorMatrix generator;
  Eigen::MatrixXd F;
  std::vector<std::vector<std::size_t>> supports;
  double zero_tolerance = 0.0;
};

struct WorkerTask {
  std::size_t row = 0;
  std::vector<std::size_t> support;
  std::vector<double> coefficients;
};

struct WorkerOutput {
  std::size_t row = 0;
  double value = 0.0;
};

enum class Route {
  DenseSolve,  // LU solves against submatrices of B
  Polynomial,  // Vandermonde generators only: evaluation + interpolation
};

struct EncodeOptions {
  Route route = Route::DenseSolve;
  unsigned threads = 1;  // column ranges are encoded independently; output is identical
};

/// Rows that must be zero in column `column` of F: the cyclic window
/// {column, ..., column + K - M - 1} mod P. Size K - M.
std::vector<std::size_t> zero_support(std::size_t column, const CodeParams& params);

/// Allowed-nonzero columns of row `row` under the cyclic pattern; exactly
/// params.sparsity() entries, ascending.
std::vector<std::size_t> row_support(std::size_t row, const CodeParams& params);

/// z = -(B^U_{cols M..K-1})^{-1} B^U_{cols 0..M-1} a_col, so that
/// B^U [a_col; z] = 0. Empty when K = M.
Eigen::VectorXd solve_appended(const Eigen::VectorXd& a_col, std::span<const std::size_t> zero_rows,
                               const GeneratorMatrix& generator, std::size_t M);

/// Encodes an M x n_raw matrix A into F = B * [A; Z] with the cyclic sparsity
/// pattern. Columns of A are zero-padded to params.N.
EncodedTransform encode(const Eigen::MatrixXd& A, const GeneratorMatrix& generator,
                        const CodeParams& params, const EncodeOptions& options = {});

/// Zero-pads x (length n_raw or N) to length N.
Eigen::VectorXd pad_input(const Eigen::VectorXd& x, const CodeParams& params);

WorkerTask make_task(const EncodedTransform& code, std::size_t row);

/// Gathers x restricted to `support`.
std::vector<double> slice_input(const Eigen::VectorXd& x_padded, std::span<const std::size_t> support);

WorkerOutput worker_dot(const WorkerTask& task, std::span<const double> x_slice);

/// Runs all P workers on x (length n_raw or N).
std::vector<WorkerOutput> run_workers(const EncodedTransform& code, const Eigen::VectorXd& x);

/// Recovers A x from exactly K outputs with distinct rows.
Eigen::VectorXd decode(std::span<const WorkerOutput> outputs, const GeneratorMatrix& generator,
                       const CodeParams& params, Route route = Route::DenseSolve);

/// Recovers A x from all P outputs when at most e_max <= floor((P-K)/2) of
/// them are arbitrary garbage. Searches K-subsets in lexicographic order and
/// accepts the first decode whose re-encoding matches at least P - e_max
/// outputs. Throws NumericalError when no subset is consistent or when two
/// consistent subsets disagree.
Eigen::VectorXd decode_with_errors(std::span<const WorkerOutput> outputs, std::size_t e_max,
                                   const GeneratorMatrix& generator, const CodeParams& params);

/// Splits the rows of A into chunks of at most chunk_m rows and encodes each
/// with the same generator (P = B.rows(), K = B.cols()).
std::vector<EncodedTransform> encode_chunked(const Eigen::MatrixXd& A, const GeneratorMatrix& generator,
                                             std::size_t chunk_m, const EncodeOptions& options = {});

/// Stacks per-chunk decodes; outputs[c] holds K outputs of chunk c.
Eigen::VectorXd decode_chunked(std::span<const EncodedTransform> chunks,
                               std::span<const std::vector<WorkerOutput>> outputs);

}  // namespace shortdot
