#include "shortdot/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

#include "shortdot/errors.hpp"
#include "shortdot/params.hpp"

namespace shortdot::experiments {

namespace {

using strategies::StrategyId;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Evaluated {
  std::optional<double> analytic;
  std::size_t K = 0;
  strategies::TaskPlan plan;
};

std::optional<Evaluated> evaluate(StrategyId id, std::size_t P, std::size_t M, std::size_t N,
                                  std::optional<std::size_t> fixed_K, std::size_t s,
                                  const straggler::DelayModel& model, bool want_plan) {
  const strategies::Workload w{P, M, N};
  const auto n = static_cast<double>(N);
  const std::size_t blocks = (N + s - 1) / s;
  Evaluated e;
  switch (id) {
    case StrategyId::Uncoded:
      e.analytic = straggler::expected_time_uncoded(P, M, n, model);
      e.K = P;
      if (want_plan) e.plan = strategies::plan_uncoded(w);
      break;
    case StrategyId::Repetition:
      if (M * blocks > P) return std::nullopt;
      if (s == N) e.analytic = straggler::expected_time_repetition(P, M, n, model);
      e.K = strategies::worst_case_threshold(id, w, s);
      if (want_plan) e.plan = strategies::plan_repetition_block(w, s);
      break;
    case StrategyId::Mds:
      e.analytic = straggler::expected_time_mds(P, M, n, model);
      e.K = M;
      if (want_plan) e.plan = strategies::plan_mds(w);
      break;
    case StrategyId::ShortDot: {
      e.K = fixed_K ? *fixed_K : straggler::optimize_k(P, M, n, model).K;
      e.analytic = straggler::expected_time_short_dot(P, e.K, M, n, model);
      if (want_plan) e.plan = strategies::plan_short_dot(validate_params(P, e.K, M, N));
      break;
    }
    case StrategyId::ShortMds:
      if (P / blocks < M) return std::nullopt;
      if (s == N) e.analytic = straggler::expected_time_mds(P, M, n, model);
      e.K = strategies::worst_case_threshold(id, w, s);
      if (want_plan) e.plan = strategies::plan_short_mds(w, s);
      break;
  }
  return e;
}

}  // namespace

void validate(const SweepConfig& c) {
  if (c.P == 0 || c.N == 0) throw ValidationError("sweep needs P >= 1 and N >= 1");
  const std::size_t m_last = c.m_last == 0 ? c.P : c.m_last;
  if (c.m_first == 0 || c.m_first > m_last || m_last > c.P) {
    throw ValidationError("sweep needs 1 <= m_first <= m_last <= P");
  }
  if (c.strategies.empty()) throw ValidationError("sweep needs at least one strategy");
  if (c.s && (*c.s == 0 || *c.s > c.N)) throw ValidationError("block length s must satisfy 1 <= s <= N");
  if (c.K && (*c.K < m_last || *c.K > c.P)) throw ValidationError("fixed K must satisfy m_last <= K <= P");
  straggler::validate(c.model);
}

std::vector<SweepRow> run_sweep(const SweepConfig& c) {
  validate(c);
  std::vector<SweepRow> rows;
  const std::size_t m_last = c.m_last == 0 ? c.P : c.m_last;
  for (std::size_t M = c.m_first; M <= m_last; ++M) {
    for (auto id : c.strategies) {
      const auto e = evaluate(id, c.P, M, c.N, c.K, c.s.value_or(c.N), c.model, c.trials > 0);
      if (!e) continue;
      SweepRow row{M, id, e->analytic, std::nullopt, std::nullopt, e->K};
      if (c.trials > 0) {
        const auto report = straggler::monte_carlo(e->plan, c.model, c.trials, c.seed, c.threads);
        row.mc_mean = report.mc_mean;
        row.mc_stderr = report.mc_stderr;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "M,strategy,analytic_E,mc_mean,mc_stderr,K_used\n";
  for (const auto& r : rows) {
    out << r.M << ',' << strategies::to_string(r.strategy) << ',' << (r.analytic ? fmt(*r.analytic) : "") << ','
        << (r.mc_mean ? fmt(*r.mc_mean) : "") << ',' << (r.mc_stderr ? fmt(*r.mc_stderr) : "") << ','
        << r.K_used << '\n';
  }
}

std::string sweep_plot_script(const std::string& csv_name, const std::string& png_name) {
  return "#!/usr/bin/env python3\n"
         "# Plots expected completion time against M for each strategy.\n"
         "import csv\n"
         "import os\n"
         "from collections import defaultdict\n"
         "\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "here = os.path.dirname(os.path.abspath(__file__))\n"
         "curves = defaultdict(lambda: ([], []))\n"
         "with open(os.path.join(here, \"" + csv_name + "\"), newline=\"\") as f:\n"
         "    for row in csv.DictReader(f):\n"
         "        if not row[\"analytic_E\"]:\n"
         "            continue\n"
         "        xs, ys = curves[row[\"strategy\"]]\n"
         "        xs.append(int(row[\"M\"]))\n"
         "        ys.append(float(row[\"analytic_E\"]))\n"
         "\n"
         "fig, ax = plt.subplots(figsize=(7, 4.5))\n"
         "for name, (xs, ys) in sorted(curves.items()):\n"
         "    ax.plot(xs, ys, label=name)\n"
         "ax.set_xlabel(\"M (number of dot products)\")\n"
         "ax.set_ylabel(\"expected completion time\")\n"
         "ax.legend()\n"
         "ax.grid(True, alpha=0.3)\n"
         "fig.tight_layout()\n"
         "fig.savefig(os.path.join(here, \"" + png_name + "\"), dpi=150)\n";
}

std::vector<double> analytic_curve(StrategyId id, std::size_t P, double N, std::size_t m_first,
                                   std::size_t m_last, const straggler::DelayModel& model) {
  if (m_first == 0 || m_first > m_last || m_last > P) throw ValidationError("curve needs 1 <= m_first <= m_last <= P");
  std::vector<double> out;
  for (std::size_t M = m_first; M <= m_last; ++M) {
    switch (id) {
      case StrategyId::Uncoded:
        out.push_back(straggler::expected_time_uncoded(P, M, N, model));
        break;
      case StrategyId::Repetition:
        out.push_back(straggler::expected_time_repetition(P, M, N, model));
        break;
      case StrategyId::Mds:
        out.push_back(straggler::expected_time_mds(P, M, N, model));
        break;
      case StrategyId::ShortDot:
        out.push_back(straggler::optimize_k(P, M, N, model).expected);
        break;
      case StrategyId::ShortMds:
        throw ValidationError("short-mds has no closed-form expectation");
    }
  }
  return out;
}

std::vector<double> integer_effect_deviation(StrategyId id, std::size_t P, double N,
                                             const straggler::DelayModel& model) {
  std::vector<double> out;
  for (std::size_t M = 1; M <= P; ++M) {
    if (id == StrategyId::Uncoded) {
      out.push_back(straggler::expected_time_uncoded(P, M, N, model) - straggler::smooth_time_uncoded(P, M, N, model));
    } else if (id == StrategyId::Repetition) {
      out.push_back(straggler::expected_time_repetition(P, M, N, model) -
                    straggler::smooth_time_repetition(P, M, N, model));
    } else {
      throw ValidationError("integer effects exist only for uncoded and repetition");
    }
  }
  return out;
}

std::vector<Ripple> find_ripples(const std::vector<double>& deviation, double floor) {
  // deviation[i] belongs to M = i + 1. A ripple is a maximal run above the
  // floor that is closed on both sides by values at or below it.
  std::vector<Ripple> out;
  std::size_t i = 0;
  while (i < deviation.size()) {
    if (deviation[i] <= floor) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    std::size_t peak = i;
    while (i < deviation.size() && deviation[i] > floor) {
      if (deviation[i] > deviation[peak]) peak = i;
      ++i;
    }
    if (start > 0 && i < deviation.size()) out.push_back({start + 1, peak + 1, i + 1});
  }
  return out;
}

void write_scaling_csv(std::ostream& out, const std::vector<straggler::ScalingRow>& rows) {
  out << "P,M,K,short_dot_E_over_N,uncoded_E_over_N,repetition_E_over_N,mds_E_over_N,ratio\n";
  for (const auto& r : rows) {
    out << r.P << ',' << r.M << ',' << r.K << ',' << fmt(r.short_dot) << ',' << fmt(r.uncoded) << ','
        << fmt(r.repetition) << ',' << fmt(r.mds) << ',' << fmt(r.ratio) << '\n';
  }
}

ComparisonResult run_cluster_comparison(std::uint64_t seed, std::size_t trials, const straggler::DelayModel& model,
                                        unsigned threads) {
  constexpr std::size_t P = 20;
  constexpr std::size_t M = 10;
  constexpr std::size_t K = 18;
  const auto params = validate_params(P, K, M, 785);
  const strategies::Workload w{P, M, params.N};
  const auto N = static_cast<double>(params.N);

  struct Entry {
    StrategyId id;
    std::size_t K;
    double analytic;
    strategies::TaskPlan plan;
  };
  const Entry entries[] = {
      {StrategyId::Uncoded, P, straggler::expected_time_uncoded(P, M, N, model), strategies::plan_uncoded(w)},
      {StrategyId::ShortDot, K, straggler::expected_time_short_dot(P, K, M, N, model), strategies::plan_short_dot(params)},
      {StrategyId::Mds, M, straggler::expected_time_mds(P, M, N, model), strategies::plan_mds(w)},
  };

  ComparisonResult result;
  for (const auto& e : entries) {
    const auto report = straggler::monte_carlo(e.plan, model, trials, seed, threads);
    result.rows.push_back({e.id, e.K, e.analytic, report.mc_mean, report.mc_stderr});
  }
  const auto& unc = result.rows[0];
  const auto& sd = result.rows[1];
  const auto& mds = result.rows[2];
  result.analytic_ordering = sd.analytic < unc.analytic && unc.analytic < mds.analytic;
  result.simulated_ordering = sd.mc_mean < unc.mc_mean && unc.mc_mean < mds.mc_mean;
  return result;
}

void write_comparison_csv(std::ostream& out, const ComparisonResult& result, std::uint64_t seed) {
  out << "# simulated: shifted-exponential service times, not wall-clock measurements; seed=" << seed << '\n';
  out << "strategy,K,analytic_E,simulated_mean,simulated_stderr\n";
  for (const auto& r : result.rows) {
    out << strategies::to_string(r.strategy) << ',' << r.K << ',' << fmt(r.analytic) << ',' << fmt(r.mc_mean) << ','
        << fmt(r.mc_stderr) << '\n';
  }
  out << "# ordering short-dot < uncoded < mds: analytic=" << (result.analytic_ordering ? "yes" : "no")
      << " simulated=" << (result.simulated_ordering ? "yes" : "no") << '\n';
}

}  // namespace shortdot::experiments
