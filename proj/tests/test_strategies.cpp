#include <doctest.h>

#include <memory>
#include <random>

#include "oracles.hpp"
#include "shortdot/errors.hpp"
#include "shortdot/strategies.hpp"

using namespace shortdot;
using namespace shortdot::strategies;

namespace {

// Largest number of processors an adversary can leave finished while the
// plan still cannot recover, found by trying every subset.
std::size_t max_failing_exhaustive(const TaskPlan& plan) {
  const std::size_t P = plan.processors();
  std::size_t worst = 0;
  for (std::size_t k = 0; k <= P; ++k) {
    bool some_fail = false;
    oracle::each_mask(P, k, [&](const std::vector<bool>& mask) {
      if (some_fail) return;
      const std::unique_ptr<bool[]> finished(new bool[P]);
      std::copy(mask.begin(), mask.end(), finished.get());
      if (!can_recover(plan, std::span<const bool>(finished.get(), P))) some_fail = true;
    });
    if (some_fail) worst = k;
  }
  return worst;
}

}  // namespace

TEST_CASE("split_m1_m2") {
  auto s = split_m1_m2(6, 4);
  CHECK(s.m1 == 2);
  CHECK(s.m2 == 2);
  s = split_m1_m2(6, 3);
  CHECK(s.m1 == 3);
  CHECK(s.m2 == 0);
  CHECK(s.ceil_share == 2);
  s = split_m1_m2(7, 3);
  CHECK(s.m1 == 1);
  CHECK(s.m2 == 2);
  for (std::size_t P = 1; P <= 40; ++P) {
    for (std::size_t M = 1; M <= P; ++M) {
      const auto t = split_m1_m2(P, M);
      CHECK(t.m1 + t.m2 == M);
      CHECK(t.m1 * t.ceil_share + t.m2 * t.floor_share == P);
    }
  }
}

TEST_CASE("plans") {
  auto u = plan_uncoded({6, 3, 12});
  CHECK(u.task_lengths == std::vector<std::size_t>(6, 6));
  CHECK(u.rule.kind == RuleKind::All);
  u = plan_uncoded({6, 4, 12});
  std::vector<std::size_t> lengths = u.task_lengths;
  std::sort(lengths.begin(), lengths.end());
  CHECK(lengths == std::vector<std::size_t>{6, 6, 6, 6, 12, 12});
  CHECK(plan_uncoded({1, 1, 9}).task_lengths == std::vector<std::size_t>{9});

  const Workload w{6, 1, 12};
  const auto rep = plan_repetition_block(w, 6);
  CHECK(rep.groups.size() == 2);
  for (const auto& g : rep.groups) CHECK(g.size() == 3);
  CHECK(rep.task_lengths == std::vector<std::size_t>(6, 6));
  CHECK(worst_case_threshold(StrategyId::Repetition, {6, 3, 12}, 12) == 5);
  CHECK(worst_case_threshold(StrategyId::Repetition, {6, 1, 12}, 12) == 1);
  CHECK_THROWS_AS(plan_repetition_block(w, 13), ValidationError);
  CHECK_THROWS_AS(plan_repetition_block(w, 0), ValidationError);

  const auto mds = plan_mds({6, 3, 12});
  CHECK(mds.task_lengths == std::vector<std::size_t>(6, 12));
  CHECK(mds.rule.kind == RuleKind::KthOverall);
  CHECK(mds.rule.k == 3);
  CHECK(same_schedule(plan_mds({6, 6, 12}), plan_uncoded({6, 6, 12})) == false);
  CHECK(plan_mds({6, 6, 12}).task_lengths == std::vector<std::size_t>(6, 12));
  CHECK(same_schedule(plan_short_dot(validate_params(6, 3, 3, 12)), mds));

  const auto sm = plan_short_mds({20, 3, 100}, 50);
  CHECK(sm.groups.size() == 2);
  CHECK(sm.worst_case_k == 13);
  CHECK(same_schedule(plan_short_mds({20, 3, 100}, 100), plan_mds({20, 3, 100})));
  CHECK_THROWS_AS(plan_short_mds({6, 4, 12}, 4), ValidationError);

  const auto sd = plan_short_dot(validate_params(6, 5, 3, 12));
  CHECK(sd.task_lengths == std::vector<std::size_t>(6, 8));
  CHECK(sd.rule.k == 5);
  CHECK(plan_short_dot(validate_params(20, 18, 10, 800)).task_lengths == std::vector<std::size_t>(20, 480));
  const auto lim = plan_short_dot(validate_params(5, 5, 1, 10));
  CHECK(lim.task_lengths == std::vector<std::size_t>(5, 2));
  CHECK(lim.rule.k == 5);
}

TEST_CASE("short-mds and short-dot thresholds") {
  for (std::size_t P = 2; P <= 30; ++P) {
    const std::size_t N = 4 * P;
    for (std::size_t M = 1; M <= P; ++M) {
      for (std::size_t s = 1; s <= N; ++s) {
        const Workload w{P, M, N};
        const std::size_t L = (N + s - 1) / s;
        if (P / L < M) continue;
        const auto kmds = worst_case_threshold(StrategyId::ShortMds, w, s);
        const auto ksd = worst_case_threshold(StrategyId::ShortDot, w, s);
        if (N % s == 0) CHECK(kmds == ksd);
        CHECK(kmds >= ksd);
      }
    }
  }
  // A strict gap for some s that does not divide N.
  CHECK(worst_case_threshold(StrategyId::ShortMds, {10, 1, 20}, 9) == 8);
  CHECK(worst_case_threshold(StrategyId::ShortDot, {10, 1, 20}, 9) == 7);
}

TEST_CASE("finish_time rules") {
  TaskPlan all = plan_uncoded({3, 1, 3});
  const std::vector<double> t{3, 1, 2};
  CHECK(finish_time(all, t) == 3);
  TaskPlan kth = plan_mds({3, 2, 3});
  CHECK(finish_time(kth, t) == 2);
  TaskPlan grouped = plan_repetition_block({3, 1, 4}, 2);
  grouped.groups = {{0, 1}, {2}};
  CHECK(finish_time(grouped, t) == 2);
  TaskPlan broken = kth;
  broken.rule.k = 4;
  CHECK_THROWS_AS(finish_time(broken, t), ValidationError);
  const std::vector<double> short_t{1, 2};
  CHECK_THROWS_AS(finish_time(kth, short_t), ValidationError);
}

TEST_CASE("finish_time is monotone in every coordinate") {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(1.0, 3.0);
  const std::vector<TaskPlan> plans{plan_uncoded({9, 4, 36}), plan_repetition_block({9, 2, 36}, 12),
                                    plan_mds({9, 4, 36}), plan_short_mds({9, 2, 36}, 12),
                                    plan_short_dot(validate_params(9, 6, 2, 36))};
  for (const auto& plan : plans) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> t(9);
      for (auto& v : t) v = u(gen);
      const double base = finish_time(plan, t);
      for (std::size_t i = 0; i < 9; ++i) {
        auto bumped = t;
        bumped[i] += 0.5;
        CHECK(finish_time(plan, bumped) >= base);
      }
    }
  }
}

TEST_CASE("worst-case thresholds against exhaustive adversary (P <= 10)") {
  for (std::size_t P = 1; P <= 10; ++P) {
    const std::size_t N = 2 * P;
    for (std::size_t M = 1; M <= P; ++M) {
      for (std::size_t s = 1; s <= N; ++s) {
        const Workload w{P, M, N};
        const std::size_t L = (N + s - 1) / s;
        std::vector<TaskPlan> plans;
        if (M * L <= P) plans.push_back(plan_repetition_block(w, s));
        if (P / L >= M) plans.push_back(plan_short_mds(w, s));
        if (s * P >= N * M) plans.push_back(plan_short_dot_for_length(w, s));
        if (s == N) {
          plans.push_back(plan_mds(w));
          plans.push_back(plan_uncoded(w));
        }
        for (const auto& plan : plans) {
          CAPTURE(P);
          CAPTURE(M);
          CAPTURE(s);
          CAPTURE(to_string(plan.strategy));
          CHECK(max_failing_exhaustive(plan) + 1 == plan.worst_case_k);
        }
      }
    }
  }
}
