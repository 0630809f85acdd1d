#pragma once

// Shifted-exponential service times: a task of length s finishes at
// t = s (1 + E / mu) with E ~ Exp(1).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shortdot/strategies.hpp"

namespace shortdot::straggler {

struct DelayModel {
  double mu = 5.0;
};

void validate(const DelayModel& model);

/// H_n = sum_{i=1..n} 1/i, H_0 = 0.
double harmonic(std::size_t n);
/// H_n - H_m for n >= m, summed directly over (m, n].
double harmonic_difference(std::size_t n, std::size_t m);

/// Inverse CDF: s (1 - ln(1 - u) / mu).
double sample_time(double s, const DelayModel& model, double u);

/// Expected K-th smallest of P iid task times of length s:
/// s (1 + (H_P - H_{P-K}) / mu).
double expected_kth_order(std::size_t P, std::size_t K, double s, const DelayModel& model);

double expected_time_short_dot(std::size_t P, std::size_t K, std::size_t M, double N,
                               const DelayModel& model);
double expected_time_mds(std::size_t P, std::size_t M, double N, const DelayModel& model);
/// Closed form when M | P, numeric integration of the two-group CDF otherwise.
double expected_time_uncoded(std::size_t P, std::size_t M, double N, const DelayModel& model);
/// Closed form when M | P, numeric integration of the two-group CDF otherwise.
double expected_time_repetition(std::size_t P, std::size_t M, double N, const DelayModel& model);

/// The M | P closed forms evaluated at any M (no integer effects):
/// (MN/P)(1 + H_P/mu) and N (1 + M H_M / (P mu)).
double smooth_time_uncoded(std::size_t P, std::size_t M, double N, const DelayModel& model);
double smooth_time_repetition(std::size_t P, std::size_t M, double N, const DelayModel& model);

/// One factor (1 - exp(-mu * rate_multiplier * (t / shift - 1)))^count of a
/// product CDF, zero for t < shift.
struct CdfFactor {
  double count = 1.0;
  double shift = 1.0;
  double rate_multiplier = 1.0;
};

/// E[T] = integral_0^inf (1 - prod_g F_g(t)) dt. Adaptive quadrature on
/// [max shift, t_cap] plus an exponential tail bound beyond t_cap, relative
/// tolerance 1e-6 or better.
double expected_time_numeric(std::span<const CdfFactor> factors, const DelayModel& model);

std::vector<CdfFactor> uncoded_factors(std::size_t P, std::size_t M, double N);
std::vector<CdfFactor> repetition_factors(std::size_t P, std::size_t M, double N);

struct KChoice {
  std::size_t K = 0;
  double expected = 0.0;
};

/// argmin over K in {M, ..., P} of expected_time_short_dot; ties go to the
/// smallest K.
KChoice optimize_k(std::size_t P, std::size_t M, double N, const DelayModel& model);

struct SimulationReport {
  strategies::StrategyId strategy = strategies::StrategyId::ShortDot;
  std::optional<double> analytic_expected;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Thread count from SHORTDOT_THREADS when set (>= 1), else hardware
/// concurrency.
unsigned default_threads();

/// Trial t draws processor i's time from stream (seed, t); per-trial results
/// are reduced in trial order, so the report does not depend on `threads`
/// (0 = default_threads()).
SimulationReport monte_carlo(const strategies::TaskPlan& plan, const DelayModel& model,
                             std::size_t trials, std::uint64_t seed, unsigned threads = 0);

/// Closed-form expectation for the plan's strategy when one exists
/// (uncoded, repetition with s = N, MDS, Short-Dot).
std::optional<double> analytic_expected(const strategies::TaskPlan& plan, const DelayModel& model);

struct ScalingRow {
  std::size_t P = 0;
  std::size_t M = 0;
  std::size_t K = 0;
  double short_dot = 0.0;   // E[T]/N
  double uncoded = 0.0;
  double repetition = 0.0;
  double mds = 0.0;
  double ratio = 0.0;       // min(uncoded, repetition, mds) / short_dot
};

/// M = round(P / ln P), K = P - round(M / 2); scaled closed forms.
std::vector<ScalingRow> scaling_regime(std::span<const std::size_t> P_values,
                                         const DelayModel& model);

}  // namespace shortdot::straggler
