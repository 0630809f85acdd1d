#include "shortdot/strategies.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "shortdot/errors.hpp"

namespace shortdot::strategies {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Contiguous processor ranges of the given sizes.
std::vector<std::vector<std::size_t>> contiguous_groups(const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<std::size_t>> groups;
  groups.reserve(sizes.size());
  std::size_t next = 0;
  for (std::size_t size : sizes) {
    auto& g = groups.emplace_back(size);
    for (auto& p : g) p = next++;
  }
  return groups;
}

std::vector<std::vector<std::size_t>> single_group(std::size_t P) {
  return contiguous_groups(std::vector<std::size_t>{P});
}

std::size_t blocks_for(const Workload& w, std::size_t s) {
  if (s == 0 || s > w.N) {
    throw ValidationError("block length s must be in [1, N], got " + std::to_string(s));
  }
  return ceil_div(w.N, s);
}

void validate_rule(const TaskPlan& plan) {
  const std::size_t P = plan.processors();
  const RecoveryRule& rule = plan.rule;
  if (rule.kind == RuleKind::KthOverall && (rule.k == 0 || rule.k > P)) {
    throw ValidationError("KthOverall rule needs 1 <= k <= P");
  }
  if (rule.kind == RuleKind::OnePerGroup || rule.kind == RuleKind::KPerGroup) {
    std::vector<int> seen(P, 0);
    for (const auto& g : plan.groups) {
      if (g.empty()) throw ValidationError("empty recovery group");
      if (rule.kind == RuleKind::KPerGroup && (rule.k == 0 || g.size() < rule.k)) {
        throw ValidationError("recovery group smaller than its per-group threshold");
      }
      for (std::size_t p : g) {
        if (p >= P) throw ValidationError("group member out of range");
        ++seen[p];
      }
    }
    if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
      throw ValidationError("recovery groups must partition the processors");
    }
  }
}

}  // namespace

std::string_view to_string(StrategyId id) {
  switch (id) {
    case StrategyId::Uncoded: return "uncoded";
    case StrategyId::Repetition: return "repetition";
    case StrategyId::Mds: return "mds";
    case StrategyId::ShortMds: return "short-mds";
    case StrategyId::ShortDot: return "short-dot";
  }
  return "unknown";
}

StrategyId parse_strategy(std::string_view name) {
  for (auto id : {StrategyId::Uncoded, StrategyId::Repetition, StrategyId::Mds, StrategyId::ShortMds,
                  StrategyId::ShortDot}) {
    if (to_string(id) == name) return id;
  }
  throw ValidationError("unknown strategy '" + std::string(name) + "'");
}

void validate(const Workload& w) {
  if (w.P == 0 || w.M == 0 || w.N == 0) throw ValidationError("P, M and N must be positive");
  if (w.M > w.P) throw ValidationError("M must not exceed P");
}

bool same_schedule(const TaskPlan& a, const TaskPlan& b) {
  return a.task_lengths == b.task_lengths && a.groups == b.groups && a.rule == b.rule;
}

IntegerSplit split_m1_m2(std::size_t P, std::size_t M) {
  if (M == 0 || M > P) throw ValidationError("split needs 1 <= M <= P");
  const std::size_t hi = ceil_div(P, M);
  const std::size_t lo = P / M;
  if (hi == lo) return {M, 0, hi, lo};
  const std::size_t m1 = P - lo * M;
  return {m1, M - m1, hi, lo};
}

std::vector<std::size_t> balanced_sizes(std::size_t total, std::size_t parts) {
  if (parts == 0) throw ValidationError("cannot split into zero parts");
  std::vector<std::size_t> sizes(parts, total / parts);
  for (std::size_t i = 0; i < total % parts; ++i) ++sizes[i];
  return sizes;
}

TaskPlan plan_uncoded(const Workload& w) {
  validate(w);
  const IntegerSplit split = split_m1_m2(w.P, w.M);
  if (w.N < split.ceil_share) throw ValidationError("N too small to split a row over ceil(P/M) processors");

  std::vector<std::size_t> shares(split.m1, split.ceil_share);
  shares.insert(shares.end(), split.m2, split.floor_share);

  TaskPlan plan;
  plan.strategy = StrategyId::Uncoded;
  plan.workload = w;
  plan.block_length = w.N;
  plan.groups = contiguous_groups(shares);
  plan.task_lengths.reserve(w.P);
  for (std::size_t share : shares) {
    for (std::size_t piece : balanced_sizes(w.N, share)) plan.task_lengths.push_back(piece);
  }
  plan.rule = {RuleKind::All, w.P};
  plan.worst_case_k = worst_case_threshold(StrategyId::Uncoded, w, w.N);
  return plan;
}

TaskPlan plan_repetition_block(const Workload& w, std::size_t s) {
  validate(w);
  const std::size_t blocks = blocks_for(w, s);
  const std::size_t groups = w.M * blocks;
  if (groups > w.P) {
    throw ValidationError("repetition needs M * ceil(N/s) = " + std::to_string(groups) +
                          " <= P processors");
  }
  const auto block_sizes = balanced_sizes(w.N, blocks);

  TaskPlan plan;
  plan.strategy = StrategyId::Repetition;
  plan.workload = w;
  plan.block_length = s;
  plan.groups = contiguous_groups(balanced_sizes(w.P, groups));
  plan.task_lengths.assign(w.P, 0);
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t p : plan.groups[g]) plan.task_lengths[p] = block_sizes[g % blocks];
  }
  plan.rule = {RuleKind::OnePerGroup, 1};
  plan.worst_case_k = worst_case_threshold(StrategyId::Repetition, w, s);
  return plan;
}

TaskPlan plan_mds(const Workload& w) {
  validate(w);
  TaskPlan plan;
  plan.strategy = StrategyId::Mds;
  plan.workload = w;
  plan.block_length = w.N;
  plan.task_lengths.assign(w.P, w.N);
  plan.groups = single_group(w.P);
  plan.rule = {RuleKind::KthOverall, w.M};
  plan.worst_case_k = w.M;
  return plan;
}

TaskPlan plan_short_mds(const Workload& w, std::size_t s) {
  validate(w);
  const std::size_t blocks = blocks_for(w, s);
  if (w.P / blocks < w.M) {
    throw ValidationError("short-mds needs floor(P / ceil(N/s)) >= M processors per block");
  }
  const auto block_sizes = balanced_sizes(w.N, blocks);

  TaskPlan plan;
  plan.strategy = StrategyId::ShortMds;
  plan.workload = w;
  plan.block_length = s;
  plan.groups = contiguous_groups(balanced_sizes(w.P, blocks));
  plan.task_lengths.assign(w.P, 0);
  for (std::size_t g = 0; g < blocks; ++g) {
    for (std::size_t p : plan.groups[g]) plan.task_lengths[p] = block_sizes[g];
  }
  // A single block is a plain MDS code over all processors.
  plan.rule = {blocks == 1 ? RuleKind::KthOverall : RuleKind::KPerGroup, w.M};
  plan.worst_case_k = worst_case_threshold(StrategyId::ShortMds, w, s);
  return plan;
}

TaskPlan plan_short_dot(const CodeParams& params) {
  TaskPlan plan;
  plan.strategy = StrategyId::ShortDot;
  plan.workload = {params.P, params.M, params.N};
  validate(plan.workload);
  plan.block_length = params.sparsity();
  plan.task_lengths.assign(params.P, params.sparsity());
  plan.groups = single_group(params.P);
  plan.rule = {RuleKind::KthOverall, params.K};
  plan.worst_case_k = params.K;
  return plan;
}

TaskPlan plan_short_dot_for_length(const Workload& w, std::size_t s) {
  validate(w);
  const std::size_t K = worst_case_threshold(StrategyId::ShortDot, w, s);
  return plan_short_dot(CodeParams{w.P, K, w.M, w.N, w.N});
}

std::size_t worst_case_threshold(StrategyId id, const Workload& w, std::size_t s) {
  validate(w);
  switch (id) {
    case StrategyId::Uncoded:
      return w.P;
    case StrategyId::Mds:
      return w.M;
    case StrategyId::Repetition: {
      const std::size_t groups = w.M * blocks_for(w, s);
      if (groups > w.P) throw ValidationError("repetition needs M * ceil(N/s) <= P");
      return w.P - w.P / groups + 1;
    }
    case StrategyId::ShortMds: {
      const std::size_t per_group = w.P / blocks_for(w, s);
      if (per_group < w.M) throw ValidationError("short-mds needs floor(P / ceil(N/s)) >= M");
      return w.P - per_group + w.M;
    }
    case StrategyId::ShortDot: {
      if (w.N % w.P != 0) throw ValidationError("short-dot length formula needs P | N");
      blocks_for(w, s);
      const std::size_t share = w.P * s / w.N;
      if (share < w.M) throw ValidationError("short-dot needs floor(P s / N) >= M");
      return w.P - share + w.M;
    }
  }
  throw ValidationError("unknown strategy");
}

bool can_recover(const TaskPlan& plan, std::span<const bool> finished) {
  if (finished.size() != plan.processors()) throw ValidationError("one flag per processor expected");
  validate_rule(plan);
  const auto done = [&](std::size_t p) { return finished[p]; };
  switch (plan.rule.kind) {
    case RuleKind::All:
      return std::all_of(finished.begin(), finished.end(), [](bool f) { return f; });
    case RuleKind::KthOverall:
      return static_cast<std::size_t>(std::count(finished.begin(), finished.end(), true)) >= plan.rule.k;
    case RuleKind::OnePerGroup:
    case RuleKind::KPerGroup: {
      const std::size_t need = plan.rule.kind == RuleKind::OnePerGroup ? 1 : plan.rule.k;
      return std::all_of(plan.groups.begin(), plan.groups.end(), [&](const auto& g) {
        return static_cast<std::size_t>(std::count_if(g.begin(), g.end(), done)) >= need;
      });
    }
  }
  return false;
}

double finish_time(const TaskPlan& plan, std::span<const double> times) {
  if (times.size() != plan.processors()) throw ValidationError("one time per processor expected");
  validate_rule(plan);
  switch (plan.rule.kind) {
    case RuleKind::All:
      return *std::max_element(times.begin(), times.end());
    case RuleKind::KthOverall: {
      std::vector<double> sorted(times.begin(), times.end());
      std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(plan.rule.k - 1),
                       sorted.end());
      return sorted[plan.rule.k - 1];
    }
    case RuleKind::OnePerGroup:
    case RuleKind::KPerGroup: {
      const std::size_t need = plan.rule.kind == RuleKind::OnePerGroup ? 1 : plan.rule.k;
      double latest = -std::numeric_limits<double>::infinity();
      std::vector<double> member_times;
      for (const auto& g : plan.groups) {
        member_times.clear();
        for (std::size_t p : g) member_times.push_back(times[p]);
        std::nth_element(member_times.begin(), member_times.begin() + static_cast<std::ptrdiff_t>(need - 1),
                         member_times.end());
        latest = std::max(latest, member_times[need - 1]);
      }
      return latest;
    }
  }
  return 0.0;
}

}  // namespace shortdot::strategies
