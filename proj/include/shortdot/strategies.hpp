#pragma once

// Latency-level description of every parallelization strategy compared
// against Short-Dot: who computes how long a dot product, and which subsets
// of finished processors let the fusion node complete.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "shortdot/params.hpp"

namespace shortdot::strategies {

enum class StrategyId { Uncoded, Repetition, Mds, ShortMds, ShortDot };

std::string_view to_string(StrategyId id);
/// "uncoded" | "repetition" | "mds" | "short-mds" | "short-dot".
StrategyId parse_strategy(std::string_view name);

/// M dot products of length N on P processors.
struct Workload {
  std::size_t P = 0;
  std::size_t M = 0;
  std::size_t N = 0;
};

/// Throws ValidationError unless 1 <= M <= P and N >= 1.
void validate(const Workload& w);

enum class RuleKind {
  All,         // every processor must finish
  KthOverall,  // any k processors
  OnePerGroup, // at least one processor of every group
  KPerGroup,   // at least k processors of every group (per-group MDS)
};

struct RecoveryRule {
  RuleKind kind = RuleKind::All;
  std::size_t k = 0;

  friend bool operator==(const RecoveryRule&, const RecoveryRule&) = default;
};

struct TaskPlan {
  StrategyId strategy = StrategyId::Uncoded;
  Workload workload;
  std::size_t block_length = 0;                     // s for block strategies, else N
  std::vector<std::size_t> task_lengths;            // one per processor
  std::vector<std::vector<std::size_t>> groups;     // partition of 0..P-1
  RecoveryRule rule;
  std::size_t worst_case_k = 0;                     // worst-case number of processors to wait for

  [[nodiscard]] std::size_t processors() const { return task_lengths.size(); }
};

/// Same lengths, groups and rule (ignores the strategy label).
bool same_schedule(const TaskPlan& a, const TaskPlan& b);

/// m1 rows get ceil(P/M) processors, m2 rows get floor(P/M). When M | P the
/// result is (M, 0) with ceil_share = floor_share = P/M.
struct IntegerSplit {
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  std::size_t ceil_share = 0;
  std::size_t floor_share = 0;
};

IntegerSplit split_m1_m2(std::size_t P, std::size_t M);

/// Sizes of `parts` contiguous, balanced pieces of `total`: the first
/// total % parts pieces get one extra element.
std::vector<std::size_t> balanced_sizes(std::size_t total, std::size_t parts);

TaskPlan plan_uncoded(const Workload& w);
/// Each of the M rows is cut into ceil(N/s) blocks; the M*ceil(N/s) blocks are
/// replicated over the P processors. s = N is the plain repetition strategy.
TaskPlan plan_repetition_block(const Workload& w, std::size_t s);
TaskPlan plan_mds(const Workload& w);
/// ceil(N/s) processor groups, each running a (group size, M) MDS code on an
/// M x block submatrix.
TaskPlan plan_short_mds(const Workload& w, std::size_t s);
TaskPlan plan_short_dot(const CodeParams& params);
/// Short-Dot with the largest straggler tolerance whose task length is <= s:
/// K = P - floor(P s / N) + M. Requires P | N.
TaskPlan plan_short_dot_for_length(const Workload& w, std::size_t s);

/// Worst-case number of processors to wait for, by closed form:
/// repetition (block) P - floor(P / (M ceil(N/s))) + 1, MDS M,
/// Short-MDS P - floor(P / ceil(N/s)) + M, Short-Dot P - floor(P s / N) + M,
/// uncoded P.
std::size_t worst_case_threshold(StrategyId id, const Workload& w, std::size_t s);

/// True when the processors flagged in `finished` satisfy the plan's rule.
bool can_recover(const TaskPlan& plan, std::span<const bool> finished);

/// Time at which the plan's rule is first satisfied, given per-processor
/// completion times.
double finish_time(const TaskPlan& plan, std::span<const double> times);

}  // namespace shortdot::strategies
