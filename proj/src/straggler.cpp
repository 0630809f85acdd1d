#include "shortdot/straggler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "shortdot/errors.hpp"
#include "shortdot/rng.hpp"

namespace shortdot::straggler {

namespace {

using strategies::StrategyId;

// Tail beyond t_cap is below this fraction of the integral's lower bound.
constexpr double kTailFraction = 1e-12;
constexpr double kQuadratureTolerance = 1e-10;
constexpr double kRequiredRelativeError = 1e-6;

void check_order(std::size_t P, std::size_t K) {
  if (K == 0 || K > P) throw ValidationError("order statistic needs 1 <= K <= P");
}

bool divides(std::size_t M, std::size_t P) { return P % M == 0; }

}  // namespace

void validate(const DelayModel& model) {
  if (!(model.mu > 0.0) || !std::isfinite(model.mu)) throw ValidationError("mu must be positive and finite");
}

double harmonic(std::size_t n) { return harmonic_difference(n, 0); }

double harmonic_difference(std::size_t n, std::size_t m) {
  if (m > n) throw ValidationError("harmonic_difference needs n >= m");
  double acc = 0.0;
  for (std::size_t i = n; i > m; --i) acc += 1.0 / static_cast<double>(i);
  return acc;
}

double sample_time(double s, const DelayModel& model, double u) {
  return s * (1.0 - std::log1p(-u) / model.mu);
}

double expected_kth_order(std::size_t P, std::size_t K, double s, const DelayModel& model) {
  validate(model);
  check_order(P, K);
  return s * (1.0 + harmonic_difference(P, P - K) / model.mu);
}

double expected_time_short_dot(std::size_t P, std::size_t K, std::size_t M, double N,
                               const DelayModel& model) {
  if (M == 0 || M > K) throw ValidationError("short-dot needs 1 <= M <= K");
  check_order(P, K);
  const double s = N * static_cast<double>(P - K + M) / static_cast<double>(P);
  return expected_kth_order(P, K, s, model);
}

double expected_time_mds(std::size_t P, std::size_t M, double N, const DelayModel& model) {
  return expected_kth_order(P, M, N, model);
}

double smooth_time_uncoded(std::size_t P, std::size_t M, double N, const DelayModel& model) {
  validate(model);
  check_order(P, M);
  return static_cast<double>(M) * N / static_cast<double>(P) * (1.0 + harmonic(P) / model.mu);
}

double smooth_time_repetition(std::size_t P, std::size_t M, double N, const DelayModel& model) {
  validate(model);
  check_order(P, M);
  return N * (1.0 + static_cast<double>(M) * harmonic(M) / (static_cast<double>(P) * model.mu));
}

double expected_time_uncoded(std::size_t P, std::size_t M, double N, const DelayModel& model) {
  check_order(P, M);
  if (divides(M, P)) return smooth_time_uncoded(P, M, N, model);
  return expected_time_numeric(uncoded_factors(P, M, N), model);
}

double expected_time_repetition(std::size_t P, std::size_t M, double N, const DelayModel& model) {
  check_order(P, M);
  if (divides(M, P)) return smooth_time_repetition(P, M, N, model);
  return expected_time_numeric(repetition_factors(P, M, N), model);
}

std::vector<CdfFactor> uncoded_factors(std::size_t P, std::size_t M, double N) {
  const auto split = strategies::split_m1_m2(P, M);
  std::vector<CdfFactor> f;
  const auto hi = static_cast<double>(split.ceil_share);
  const auto lo = static_cast<double>(split.floor_share);
  if (split.m1 > 0) f.push_back({static_cast<double>(split.m1) * hi, N / hi, 1.0});
  if (split.m2 > 0) f.push_back({static_cast<double>(split.m2) * lo, N / lo, 1.0});
  return f;
}

std::vector<CdfFactor> repetition_factors(std::size_t P, std::size_t M, double N) {
  const auto split = strategies::split_m1_m2(P, M);
  std::vector<CdfFactor> f;
  if (split.m1 > 0) f.push_back({static_cast<double>(split.m1), N, static_cast<double>(split.ceil_share)});
  if (split.m2 > 0) f.push_back({static_cast<double>(split.m2), N, static_cast<double>(split.floor_share)});
  return f;
}

double expected_time_numeric(std::span<const CdfFactor> factors, const DelayModel& model) {
  validate(model);
  if (factors.empty()) throw NumericalError("numeric expectation needs at least one CDF factor");

  struct Term {
    double count;
    double shift;
    double rate;  // per unit time
  };
  std::vector<Term> terms;
  double start = 0.0;
  for (const auto& f : factors) {
    if (!(f.count > 0.0) || !(f.shift > 0.0) || !(f.rate_multiplier > 0.0) || !std::isfinite(f.count) ||
        !std::isfinite(f.shift) || !std::isfinite(f.rate_multiplier)) {
      throw NumericalError("non-convergent integral: factors need positive finite count, shift and rate");
    }
    terms.push_back({f.count, f.shift, model.mu * f.rate_multiplier / f.shift});
    start = std::max(start, f.shift);
  }

  // 1 - F(t) <= sum_g count_g exp(-rate_g (t - shift_g)); pick t_cap where the
  // integral of that bound beyond t_cap is below kTailFraction * start, which
  // is itself a lower bound on the whole integral.
  const auto groups = static_cast<double>(terms.size());
  double cap = start;
  for (const auto& t : terms) {
    const double arg = t.count * groups / (t.rate * kTailFraction * start);
    if (arg > 1.0) cap = std::max(cap, t.shift + std::log(arg) / t.rate);
  }
  double tail = 0.0;
  for (const auto& t : terms) tail += t.count * std::exp(-t.rate * (cap - t.shift)) / t.rate;

  auto survival = [&](double time) {
    double log_cdf = 0.0;
    for (const auto& t : terms) {
      const double x = t.rate * (time - t.shift);
      if (x <= 0.0) return 1.0;
      log_cdf += t.count * std::log1p(-std::exp(-x));
    }
    return -std::expm1(log_cdf);
  };

  double error = 0.0;
  const double body = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      survival, start, cap, 25, kQuadratureTolerance, &error);
  const double total = start + body + tail;
  if (!std::isfinite(total) || error > kRequiredRelativeError * total) {
    throw NumericalError("numeric expectation did not converge (error estimate " + std::to_string(error) + ")");
  }
  return total;
}

KChoice optimize_k(std::size_t P, std::size_t M, double N, const DelayModel& model) {
  validate(model);
  check_order(P, M);
  std::vector<double> prefix(P + 1, 0.0);
  for (std::size_t i = 1; i <= P; ++i) prefix[i] = prefix[i - 1] + 1.0 / static_cast<double>(i);

  KChoice best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t K = M; K <= P; ++K) {
    const double s = N * static_cast<double>(P - K + M) / static_cast<double>(P);
    const double e = s * (1.0 + (prefix[P] - prefix[P - K]) / model.mu);
    if (e < best.expected) best = {K, e};
  }
  best.expected = expected_time_short_dot(P, best.K, M, N, model);
  return best;
}

unsigned default_threads() {
  if (const char* env = std::getenv("SHORTDOT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SimulationReport monte_carlo(const strategies::TaskPlan& plan, const DelayModel& model, std::size_t trials,
                             std::uint64_t seed, unsigned threads) {
  validate(model);
  if (trials == 0) throw ValidationError("monte carlo needs at least one trial");
  const std::size_t P = plan.processors();
  if (P == 0) throw ValidationError("plan has no processors");
  {
    // Validates the rule against the plan once, up front.
    const std::vector<double> probe(P, 1.0);
    (void)strategies::finish_time(plan, probe);
  }

  std::vector<double> results(trials);
  auto run_range = [&](std::size_t first, std::size_t last) {
    std::vector<double> times(P);
    for (std::size_t t = first; t < last; ++t) {
      rng::Stream stream(seed, t);
      for (std::size_t i = 0; i < P; ++i) {
        times[i] = sample_time(static_cast<double>(plan.task_lengths[i]), model, stream.uniform());
      }
      results[t] = strategies::finish_time(plan, times);
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(threads == 0 ? default_threads() : threads, 1, trials);
  if (workers == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t per = (trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          run_range(std::min(trials, w * per), std::min(trials, (w + 1) * per));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  double sum = 0.0;
  for (double r : results) sum += r;
  const double mean = sum / static_cast<double>(trials);
  double squares = 0.0;
  for (double r : results) squares += (r - mean) * (r - mean);

  SimulationReport report;
  report.strategy = plan.strategy;
  report.analytic_expected = analytic_expected(plan, model);
  report.mc_mean = mean;
  report.mc_stderr = trials > 1 ? std::sqrt(squares / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0.0;
  report.trials = trials;
  report.seed = seed;
  return report;
}

std::optional<double> analytic_expected(const strategies::TaskPlan& plan, const DelayModel& model) {
  const auto& w = plan.workload;
  const auto N = static_cast<double>(w.N);
  switch (plan.strategy) {
    case StrategyId::Uncoded:
      return expected_time_uncoded(w.P, w.M, N, model);
    case StrategyId::Repetition:
      if (plan.block_length != w.N) return std::nullopt;
      return expected_time_repetition(w.P, w.M, N, model);
    case StrategyId::Mds:
      return expected_time_mds(w.P, w.M, N, model);
    case StrategyId::ShortDot:
      return expected_kth_order(w.P, plan.rule.k, static_cast<double>(plan.block_length), model);
    case StrategyId::ShortMds:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<ScalingRow> scaling_regime(std::span<const std::size_t> P_values, const DelayModel& model) {
  validate(model);
  std::vector<ScalingRow> rows;
  for (std::size_t P : P_values) {
    if (P < 3) throw ValidationError("theorem-4 regime needs P >= 3");
    ScalingRow row;
    row.P = P;
    row.M = static_cast<std::size_t>(std::lround(static_cast<double>(P) / std::log(static_cast<double>(P))));
    row.K = P - static_cast<std::size_t>(std::lround(static_cast<double>(row.M) / 2.0));
    row.short_dot = expected_time_short_dot(P, row.K, row.M, 1.0, model);
    row.uncoded = smooth_time_uncoded(P, row.M, 1.0, model);
    row.repetition = smooth_time_repetition(P, row.M, 1.0, model);
    row.mds = expected_time_mds(P, row.M, 1.0, model);
    row.ratio = std::min({row.uncoded, row.repetition, row.mds}) / row.short_dot;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace shortdot::straggler
