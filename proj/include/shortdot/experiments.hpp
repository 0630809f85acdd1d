#pragma once

// Batch experiments behind the CLI: strategy sweeps over M, the
// M = P / ln P scaling table, and the simulated 20-processor comparison.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shortdot/straggler.hpp"
#include "shortdot/strategies.hpp"

namespace shortdot::experiments {

struct SweepConfig {
  std::size_t P = 100;
  std::size_t N = 100;
  std::size_t m_first = 1;
  std::size_t m_last = 0;  // 0 = P
  std::vector<strategies::StrategyId> strategies = {
      strategies::StrategyId::Uncoded, strategies::StrategyId::Repetition,
      strategies::StrategyId::Mds, strategies::StrategyId::ShortDot};
  std::optional<std::size_t> K;  // Short-Dot K; unset = optimize_k per M
  std::optional<std::size_t> s;  // block length for repetition and short-mds; unset = N
  straggler::DelayModel model;
  std::size_t trials = 0;        // 0 = analytic only
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct SweepRow {
  std::size_t M = 0;
  strategies::StrategyId strategy = strategies::StrategyId::ShortDot;
  std::optional<double> analytic;  // absent when no closed form exists
  std::optional<double> mc_mean;
  std::optional<double> mc_stderr;
  std::size_t K_used = 0;
};

/// Throws ValidationError on an empty or out-of-range M range, on a fixed K
/// outside [M_last, P], or on a block length outside [1, N].
void validate(const SweepConfig& config);

/// One row per (M, strategy). Block strategies skip the M values for which
/// their plan does not exist (too few processors per block).
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Columns: M,strategy,analytic_E,mc_mean,mc_stderr,K_used.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Python/matplotlib script that plots analytic_E against M per strategy from
/// `csv_name` (read relative to the script's directory).
std::string sweep_plot_script(const std::string& csv_name, const std::string& png_name);

/// Analytic curve for one strategy over M = m_first..m_last.
std::vector<double> analytic_curve(strategies::StrategyId id, std::size_t P, double N,
                                   std::size_t m_first, std::size_t m_last,
                                   const straggler::DelayModel& model);

/// Integer-effect deviation E_integer(M) - E_smooth(M) for uncoded or
/// repetition over M = 1..P. Zero when M | P.
std::vector<double> integer_effect_deviation(strategies::StrategyId id, std::size_t P, double N,
                                             const straggler::DelayModel& model);

/// A ripple: the deviation rises above `floor` after a divisor of P and
/// falls back before the next one. Returns the (rise, fall) values of M.
struct Ripple {
  std::size_t rise_at = 0;
  std::size_t peak_at = 0;
  std::size_t fall_at = 0;
};
std::vector<Ripple> find_ripples(const std::vector<double>& deviation, double floor);

void write_scaling_csv(std::ostream& out, const std::vector<straggler::ScalingRow>& rows);

struct ComparisonRow {
  strategies::StrategyId strategy = strategies::StrategyId::ShortDot;
  std::size_t K = 0;
  double analytic = 0.0;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
};

struct ComparisonResult {
  std::vector<ComparisonRow> rows;  // uncoded, short-dot, mds
  bool analytic_ordering = false;  // short-dot < uncoded < mds
  bool simulated_ordering = false;
};

/// P = 20, M = 10, n_raw = 785 padded to 800, Short-Dot K = 18.
ComparisonResult run_cluster_comparison(std::uint64_t seed, std::size_t trials, const straggler::DelayModel& model,
                    unsigned threads = 0);

void write_comparison_csv(std::ostream& out, const ComparisonResult& result, std::uint64_t seed);

}  // namespace shortdot::experiments
