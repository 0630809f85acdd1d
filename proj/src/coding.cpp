#include "shortdot/coding.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "shortdot/errors.hpp"
#include "shortdot/linalg.hpp"
#include "shortdot/poly.hpp"
#include "shortdot/subsets.hpp"

namespace shortdot {

namespace {

using Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_generator_shape(const GeneratorMatrix& generator, const CodeParams& params) {
  if (generator.rows() != params.P || generator.cols() != params.K) {
    throw ValidationError("generator is " + std::to_string(generator.rows()) + "x" +
                          std::to_string(generator.cols()) + ", expected " + std::to_string(params.P) +
                          "x" + std::to_string(params.K));
  }
}

void require_vandermonde(const GeneratorMatrix& generator) {
  if (generator.kind != GeneratorKind::Vandermonde || generator.nodes.size() != generator.rows()) {
    throw ValidationError("polynomial route needs a Vandermonde generator");
  }
}

// Per-column encoder. The dense route factors the P distinct trailing blocks
// B^U_{cols M..K-1} once; column j uses window j mod P.
class ColumnEncoder {
 public:
  ColumnEncoder(const GeneratorMatrix& generator, const CodeParams& params, Route route)
      : generator_(generator), params_(params), route_(route) {
    if (route_ == Route::Polynomial) {
      require_vandermonde(generator_);
      return;
    }
    const std::size_t tail = params_.K - params_.M;
    if (tail == 0) return;
    windows_.reserve(params_.P);
    for (std::size_t start = 0; start < params_.P; ++start) {
      const auto rows = zero_support(start, params_);
      const Eigen::MatrixXd bu = select_rows(generator_.entries, rows);
      heads_.push_back(bu.leftCols(idx(params_.M)));
      windows_.emplace_back(bu.rightCols(idx(tail)), kMaxCondition, "appended-row solve");
    }
  }

  // Fills column j of F; `a` is column j of the padded A.
  void encode(std::size_t j, const Eigen::VectorXd& a, double zero_tolerance, Eigen::MatrixXd& F) const {
    const std::size_t tail = params_.K - params_.M;
    Eigen::VectorXd column;
    if (route_ == Route::DenseSolve) {
      Eigen::VectorXd augmented(idx(params_.K));
      augmented.head(idx(params_.M)) = a;
      if (tail > 0) {
        const std::size_t w = j % params_.P;
        augmented.tail(idx(tail)) = -windows_[w].solve(heads_[w] * a);
      }
      column = generator_.entries * augmented;
    } else {
      column = polynomial_column(j, a);
    }

    for (std::size_t u : zero_support(j, params_)) {
      const double residual = std::abs(column(idx(u)));
      if (!(residual <= zero_tolerance)) {
        throw NumericalError("column " + std::to_string(j) + ": enforced zero has magnitude " +
                             std::to_string(residual) + " above tolerance " +
                             std::to_string(zero_tolerance));
      }
      column(idx(u)) = 0.0;
    }
    F.col(idx(j)) = column;
  }

 private:
  Eigen::VectorXd polynomial_column(std::size_t j, const Eigen::VectorXd& a) const {
    const std::size_t K = params_.K;
    const std::size_t M = params_.M;
    std::vector<double> coeffs(K, 0.0);
    for (std::size_t k = 0; k < M; ++k) coeffs[k] = a(idx(k));

    const auto zeros = zero_support(j, params_);
    if (!zeros.empty()) {
      // The A-part is a degree K-1 polynomial with zero low-order terms; the
      // appended part is the degree K-M-1 interpolant cancelling it on U.
      const poly::Polynomial head(coeffs);
      std::vector<double> points(zeros.size());
      std::vector<double> targets(zeros.size());
      for (std::size_t t = 0; t < zeros.size(); ++t) {
        points[t] = generator_.nodes[zeros[t]];
        targets[t] = -head(points[t]);
      }
      const poly::Polynomial appended = poly::interpolate(points, targets);
      std::copy(appended.coefficients().begin(), appended.coefficients().end(), coeffs.begin() + idx(M));
    }
    const poly::Polynomial full(std::move(coeffs));
    Eigen::VectorXd column(idx(params_.P));
    for (std::size_t i = 0; i < params_.P; ++i) column(idx(i)) = full(generator_.nodes[i]);
    return column;
  }

  const GeneratorMatrix& generator_;
  const CodeParams& params_;
  Route route_;
  std::vector<Eigen::MatrixXd> heads_;
  std::vector<linalg::GuardedLu> windows_;
};

void check_outputs(std::span<const WorkerOutput> outputs, std::size_t P) {
  std::vector<bool> seen(P, false);
  for (const auto& o : outputs) {
    if (o.row >= P) throw ValidationError("worker index " + std::to_string(o.row) + " out of range");
    if (seen[o.row]) throw ValidationError("duplicate worker index " + std::to_string(o.row));
    seen[o.row] = true;
  }
}

// Full K-vector w with B^V w = v (its first M entries are A x).
Eigen::VectorXd solve_full(std::span<const WorkerOutput> outputs, const GeneratorMatrix& generator,
                           const CodeParams& params, Route route) {
  const std::size_t K = params.K;
  std::vector<std::size_t> rows(K);
  Eigen::VectorXd v(idx(K));
  for (std::size_t t = 0; t < K; ++t) {
    rows[t] = outputs[t].row;
    v(idx(t)) = outputs[t].value;
  }

  if (route == Route::Polynomial) {
    require_vandermonde(generator);
    std::vector<double> points(K);
    std::vector<double> values(K);
    for (std::size_t t = 0; t < K; ++t) {
      points[t] = generator.nodes[rows[t]];
      values[t] = v(idx(t));
    }
    const auto p = poly::interpolate(points, values);
    return Eigen::Map<const Eigen::VectorXd>(p.coefficients().data(), idx(K));
  }

  const Eigen::MatrixXd bv = select_rows(generator.entries, rows);
  Eigen::VectorXd w = linalg::guarded_solve(bv, v, kMaxCondition, "decode");
  const double residual = (bv * w - v).norm();
  if (!(residual <= kDecodeResidual * v.norm())) {
    throw NumericalError("decode residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return w;
}

}  // namespace

std::vector<std::size_t> zero_support(std::size_t column, const CodeParams& params) {
  if (column >= params.N) throw ValidationError("column " + std::to_string(column) + " out of range");
  std::vector<std::size_t> rows(params.K - params.M);
  for (std::size_t t = 0; t < rows.size(); ++t) rows[t] = (column + t) % params.P;
  return rows;
}

std::vector<std::size_t> row_support(std::size_t row, const CodeParams& params) {
  if (row >= params.P) throw ValidationError("row " + std::to_string(row) + " out of range");
  const std::size_t zeros = params.K - params.M;
  std::vector<std::size_t> cols;
  cols.reserve(params.sparsity());
  for (std::size_t j = 0; j < params.N; ++j) {
    // row is in U(j) iff (row - j) mod P < K - M
    const std::size_t offset = (row + params.P - j % params.P) % params.P;
    if (offset >= zeros) cols.push_back(j);
  }
  return cols;
}

Eigen::VectorXd solve_appended(const Eigen::VectorXd& a_col, std::span<const std::size_t> zero_rows,
                               const GeneratorMatrix& generator, std::size_t M) {
  const std::size_t K = generator.cols();
  if (M > K) throw ValidationError("M exceeds generator width");
  if (static_cast<std::size_t>(a_col.size()) != M) throw ValidationError("column length must equal M");
  if (zero_rows.size() != K - M) throw ValidationError("zero set must have K - M rows");
  if (zero_rows.empty()) return Eigen::VectorXd(0);

  const Eigen::MatrixXd bu = select_rows(generator.entries, zero_rows);
  const Eigen::VectorXd rhs = -(bu.leftCols(idx(M)) * a_col);
  return linalg::guarded_solve(bu.rightCols(idx(K - M)), rhs, kMaxCondition, "appended-row solve");
}

EncodedTransform encode(const Eigen::MatrixXd& A, const GeneratorMatrix& generator,
                        const CodeParams& params, const EncodeOptions& options) {
  check_generator_shape(generator, params);
  if (static_cast<std::size_t>(A.rows()) != params.M || static_cast<std::size_t>(A.cols()) != params.n_raw) {
    throw ValidationError("A is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                          ", expected " + std::to_string(params.M) + "x" + std::to_string(params.n_raw));
  }
  if (!A.allFinite()) throw ValidationError("A has non-finite entries");

  EncodedTransform code;
  code.params = params;
  code.generator = generator;
  code.zero_tolerance = A.size() == 0 ? 0.0 : kZeroToleranceScale * A.cwiseAbs().maxCoeff();
  code.F = Eigen::MatrixXd::Zero(idx(params.P), idx(params.N));

  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(idx(params.M), idx(params.N));
  padded.leftCols(idx(params.n_raw)) = A;

  const ColumnEncoder encoder(code.generator, code.params, options.route);
  auto encode_range = [&](std::size_t first, std::size_t last) {
    for (std::size_t j = first; j < last; ++j) {
      encoder.encode(j, padded.col(idx(j)), code.zero_tolerance, code.F);
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, params.N);
  if (threads == 1) {
    encode_range(0, params.N);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const std::size_t per = (params.N + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          encode_range(std::min(params.N, t * per), std::min(params.N, (t + 1) * per));
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  code.supports.reserve(params.P);
  for (std::size_t i = 0; i < params.P; ++i) code.supports.push_back(row_support(i, params));
  return code;
}

Eigen::VectorXd pad_input(const Eigen::VectorXd& x, const CodeParams& params) {
  const auto n = static_cast<std::size_t>(x.size());
  if (n == params.N) return x;
  if (n != params.n_raw) {
    throw ValidationError("x has length " + std::to_string(n) + ", expected " +
                          std::to_string(params.n_raw) + " (or padded " + std::to_string(params.N) + ")");
  }
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(idx(params.N));
  padded.head(idx(n)) = x;
  return padded;
}

WorkerTask make_task(const EncodedTransform& code, std::size_t row) {
  if (row >= code.params.P) throw ValidationError("row " + std::to_string(row) + " out of range");
  WorkerTask task;
  task.row = row;
  task.support = code.supports[row];
  task.coefficients.reserve(task.support.size());
  for (std::size_t j : task.support) task.coefficients.push_back(code.F(idx(row), idx(j)));
  return task;
}

std::vector<double> slice_input(const Eigen::VectorXd& x_padded, std::span<const std::size_t> support) {
  std::vector<double> out;
  out.reserve(support.size());
  for (std::size_t j : support) {
    if (j >= static_cast<std::size_t>(x_padded.size())) throw ValidationError("support index out of range");
    out.push_back(x_padded(idx(j)));
  }
  return out;
}

WorkerOutput worker_dot(const WorkerTask& task, std::span<const double> x_slice) {
  if (x_slice.size() != task.coefficients.size()) {
    throw ValidationError("worker " + std::to_string(task.row) + " expects " +
                          std::to_string(task.coefficients.size()) + " inputs, got " +
                          std::to_string(x_slice.size()));
  }
  double acc = 0.0;
  for (std::size_t t = 0; t < x_slice.size(); ++t) acc += task.coefficients[t] * x_slice[t];
  return {task.row, acc};
}

std::vector<WorkerOutput> run_workers(const EncodedTransform& code, const Eigen::VectorXd& x) {
  const Eigen::VectorXd padded = pad_input(x, code.params);
  std::vector<WorkerOutput> outputs;
  outputs.reserve(code.params.P);
  for (std::size_t i = 0; i < code.params.P; ++i) {
    const WorkerTask task = make_task(code, i);
    outputs.push_back(worker_dot(task, slice_input(padded, task.support)));
  }
  return outputs;
}

Eigen::VectorXd decode(std::span<const WorkerOutput> outputs, const GeneratorMatrix& generator,
                       const CodeParams& params, Route route) {
  check_generator_shape(generator, params);
  if (outputs.size() != params.K) {
    throw ValidationError("decode needs exactly K = " + std::to_string(params.K) + " outputs, got " +
                          std::to_string(outputs.size()));
  }
  check_outputs(outputs, params.P);
  return solve_full(outputs, generator, params, route).head(idx(params.M));
}

Eigen::VectorXd decode_with_errors(std::span<const WorkerOutput> outputs, std::size_t e_max,
                                   const GeneratorMatrix& generator, const CodeParams& params) {
  check_generator_shape(generator, params);
  const std::size_t P = params.P;
  const std::size_t K = params.K;
  if (outputs.size() != P) throw ValidationError("error decoding needs all P outputs");
  check_outputs(outputs, P);
  if (2 * e_max > P - K) {
    throw ValidationError("can correct at most floor((P-K)/2) = " + std::to_string((P - K) / 2) +
                          " errors, asked for " + std::to_string(e_max));
  }

  std::vector<WorkerOutput> by_row(outputs.begin(), outputs.end());
  std::sort(by_row.begin(), by_row.end(), [](const auto& a, const auto& b) { return a.row < b.row; });

  std::optional<Eigen::VectorXd> accepted;
  std::vector<WorkerOutput> subset(K);
  for_each_subset(P, K, [&](const std::vector<std::size_t>& rows) {
    for (std::size_t t = 0; t < K; ++t) subset[t] = by_row[rows[t]];
    Eigen::VectorXd w;
    try {
      w = solve_full(subset, generator, params, Route::DenseSolve);
    } catch (const NumericalError&) {
      return true;
    }
    const Eigen::VectorXd predicted = generator.entries * w;
    std::size_t matches = 0;
    for (std::size_t i = 0; i < P; ++i) {
      const double out = by_row[i].value;
      if (std::abs(predicted(idx(i)) - out) <= kErrorMatchTolerance * (1.0 + std::abs(out))) ++matches;
    }
    if (matches + e_max < P) return true;

    Eigen::VectorXd candidate = w.head(idx(params.M));
    if (!accepted) {
      accepted = std::move(candidate);
      return true;
    }
    const double scale = 1.0 + accepted->cwiseAbs().maxCoeff();
    if ((candidate - *accepted).cwiseAbs().maxCoeff() > kErrorMatchTolerance * scale) {
      throw NumericalError("ambiguous error decode: two consistent subsets disagree");
    }
    return true;
  });

  if (!accepted) throw NumericalError("no consistent decode: more than " + std::to_string(e_max) + " errors");
  return *accepted;
}

std::vector<EncodedTransform> encode_chunked(const Eigen::MatrixXd& A, const GeneratorMatrix& generator,
                                             std::size_t chunk_m, const EncodeOptions& options) {
  const std::size_t P = generator.rows();
  const std::size_t K = generator.cols();
  if (chunk_m == 0 || chunk_m > P || chunk_m > K) {
    throw ValidationError("chunk size must be in [1, min(P, K)]");
  }
  const auto rows = static_cast<std::size_t>(A.rows());
  if (rows == 0 || A.cols() == 0) throw ValidationError("A must be non-empty");

  std::vector<EncodedTransform> chunks;
  for (std::size_t first = 0; first < rows; first += chunk_m) {
    const std::size_t m = std::min(chunk_m, rows - first);
    const CodeParams params = validate_params(P, K, m, static_cast<std::size_t>(A.cols()));
    chunks.push_back(encode(A.middleRows(idx(first), idx(m)), generator, params, options));
  }
  return chunks;
}

Eigen::VectorXd decode_chunked(std::span<const EncodedTransform> chunks,
                               std::span<const std::vector<WorkerOutput>> outputs) {
  if (chunks.size() != outputs.size()) throw ValidationError("one output set per chunk expected");
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.params.M;
  Eigen::VectorXd stacked(idx(total));
  std::size_t at = 0;
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    const Eigen::VectorXd part = decode(outputs[c], chunks[c].generator, chunks[c].params);
    stacked.segment(idx(at), part.size()) = part;
    at += chunks[c].params.M;
  }
  return stacked;
}

}  // namespace shortdot
