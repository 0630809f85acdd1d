#include "shortdot/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shortdot/errors.hpp"
#include "shortdot/linalg.hpp"
#include "shortdot/rng.hpp"
#include "shortdot/subsets.hpp"

namespace shortdot {

namespace {

// Above this many submatrices build_generator skips the exhaustive check.
constexpr double kCheckBudget = 2000.0;

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  return kind == GeneratorKind::Vandermonde ? "vandermonde" : "gaussian";
}

GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "vandermonde") return GeneratorKind::Vandermonde;
  if (name == "gaussian") return GeneratorKind::Gaussian;
  throw ValidationError("unknown generator kind '" + std::string(name) + "'");
}

std::vector<double> chebyshev_nodes(std::size_t P) {
  std::vector<double> nodes(P);
  for (std::size_t i = 0; i < P; ++i) {
    nodes[i] = std::cos(static_cast<double>(2 * i + 1) * std::numbers::pi / static_cast<double>(2 * P));
  }
  return nodes;
}

GeneratorMatrix vandermonde_generator(std::span<const double> nodes, std::size_t K) {
  if (K == 0) throw ValidationError("generator needs K >= 1");
  if (nodes.size() < K) throw ValidationError("Vandermonde generator needs at least K nodes");
  std::vector<double> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("Vandermonde nodes must be pairwise distinct");
  }
  for (double h : nodes) {
    if (!std::isfinite(h)) throw ValidationError("Vandermonde nodes must be finite");
  }

  GeneratorMatrix g;
  g.kind = GeneratorKind::Vandermonde;
  g.nodes.assign(nodes.begin(), nodes.end());
  const auto P = static_cast<Eigen::Index>(nodes.size());
  g.entries.resize(P, static_cast<Eigen::Index>(K));
  for (Eigen::Index i = 0; i < P; ++i) {
    double power = 1.0;
    for (Eigen::Index j = static_cast<Eigen::Index>(K) - 1; j >= 0; --j) {
      g.entries(i, j) = power;
      power *= nodes[static_cast<std::size_t>(i)];
    }
  }
  return g;
}

GeneratorMatrix gaussian_generator(std::size_t P, std::size_t K, std::uint64_t seed) {
  if (K == 0 || P < K) throw ValidationError("Gaussian generator needs 1 <= K <= P");
  GeneratorMatrix g;
  g.kind = GeneratorKind::Gaussian;
  g.seed = seed;
  g.entries.resize(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(K));
  rng::Stream stream(seed, 0);
  for (Eigen::Index i = 0; i < g.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.entries.cols(); ++j) g.entries(i, j) = stream.normal();
  }
  return g;
}

GeneratorMatrix build_generator(const CodeParams& params, const GeneratorSpec& spec) {
  GeneratorMatrix g;
  if (spec.kind == GeneratorKind::Vandermonde) {
    const std::vector<double> nodes = spec.nodes ? *spec.nodes : chebyshev_nodes(params.P);
    if (nodes.size() != params.P) {
      throw ValidationError("expected " + std::to_string(params.P) + " Vandermonde nodes, got " +
                            std::to_string(nodes.size()));
    }
    g = vandermonde_generator(nodes, params.K);
  } else {
    g = gaussian_generator(params.P, params.K, spec.seed);
  }

  if (choose_approx(params.P, params.K) + choose_approx(params.P, params.K - params.M) <= kCheckBudget) {
    const GeneratorCheck check = check_generator(g, params.M);
    if (!check.ok) {
      throw NumericalError("generator fails the invertibility check: worst condition " +
                           std::to_string(check.worst_condition));
    }
  }
  return g;
}

GeneratorCheck check_generator(const GeneratorMatrix& generator, std::size_t M, double max_condition) {
  const std::size_t P = generator.rows();
  const std::size_t K = generator.cols();
  if (M > K) throw ValidationError("M exceeds generator width");
  GeneratorCheck result;

  auto inspect = [&](const Eigen::MatrixXd& sub) {
    const double c = linalg::condition_estimate(sub);
    result.worst_condition = std::max(result.worst_condition, c);
    ++result.submatrices;
    if (!(c <= max_condition)) result.ok = false;
    return true;
  };

  for_each_subset(P, K, [&](const std::vector<std::size_t>& rows) {
    return inspect(select_rows(generator.entries, rows));
  });
  const std::size_t tail = K - M;
  if (tail > 0) {
    const Eigen::MatrixXd trailing = generator.entries.rightCols(static_cast<Eigen::Index>(tail));
    for_each_subset(P, tail, [&](const std::vector<std::size_t>& rows) {
      return inspect(select_rows(trailing, rows));
    });
  }
  return result;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& matrix, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), matrix.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = matrix.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

}  // namespace shortdot
