// Command-line front end for the Short-Dot library.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shortdot/bounds.hpp"
#include "shortdot/coding.hpp"
#include "shortdot/errors.hpp"
#include "shortdot/experiments.hpp"
#include "shortdot/io.hpp"
#include "shortdot/rng.hpp"
#include "shortdot/straggler.hpp"
#include "shortdot/strategies.hpp"

namespace fs = std::filesystem;
using namespace shortdot;

namespace {

struct Common {
  std::optional<std::size_t> p;
  std::optional<std::string> k;  // integer or "auto"
  std::optional<std::size_t> m;
  std::optional<std::size_t> n;
  double mu = 5.0;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 1;
  std::optional<std::string> strategy;
  std::optional<std::size_t> s;
  std::optional<std::string> out;
};

template <typename T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw ValidationError(std::string("missing required flag ") + flag);
  return *v;
}

std::optional<std::size_t> parse_k(const Common& c) {
  if (!c.k || *c.k == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(*c.k, &used);
    if (used != c.k->size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("--k must be a positive integer or 'auto', got '" + *c.k + "'");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Writes to --out when given, stdout otherwise.
void emit(const Common& c, const std::string& text) {
  if (!c.out) {
    std::cout << text;
    return;
  }
  std::ofstream f(*c.out);
  if (!f || !(f << text)) throw IoError("cannot write " + *c.out);
}

std::vector<strategies::StrategyId> parse_strategy_list(const std::string& text) {
  std::vector<strategies::StrategyId> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(strategies::parse_strategy(item));
  }
  if (out.empty()) throw ValidationError("--strategy names no strategy");
  return out;
}

GeneratorSpec generator_spec(const std::string& kind, std::uint64_t gen_seed) {
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(kind);
  spec.seed = gen_seed;
  return spec;
}

int cmd_encode(const Common& c, const std::string& input, const std::string& kind, std::uint64_t gen_seed) {
  const Eigen::MatrixXd A = io::read_matrix_csv(input);
  const auto M = static_cast<std::size_t>(A.rows());
  if (c.m && *c.m != M) throw ValidationError("--m does not match the number of rows in " + input);
  if (c.n && *c.n != static_cast<std::size_t>(A.cols())) throw ValidationError("--n does not match the columns of " + input);
  const auto K = parse_k(c);
  if (!K) throw ValidationError("encode needs an integer --k");
  const auto params = validate_params(need(c.p, "--p"), *K, M, static_cast<std::size_t>(A.cols()));
  const auto code = encode(A, build_generator(params, generator_spec(kind, gen_seed)), params);
  io::save_transform(code, need(c.out, "--out"));

  std::size_t max_nz = 0, total = 0;
  for (Eigen::Index i = 0; i < code.F.rows(); ++i) {
    std::size_t nz = 0;
    for (Eigen::Index j = 0; j < code.F.cols(); ++j) nz += std::abs(code.F(i, j)) > code.zero_tolerance;
    max_nz = std::max(max_nz, nz);
    total += nz;
  }
  std::cout << "P=" << params.P << " K=" << params.K << " M=" << params.M << " N=" << params.N
            << " N_raw=" << params.n_raw << " s=" << params.sparsity() << " max_row_nonzeros=" << max_nz
            << " avg_row_nonzeros=" << fmt(static_cast<double>(total) / static_cast<double>(params.P)) << '\n';
  return 0;
}

int cmd_transform(const Common& c, const std::string& code_dir, const std::string& x_path,
                  const std::string& responders, const std::optional<std::size_t>& errors,
                  const std::string& corrupt, double corrupt_by) {
  const auto code = io::load_transform(code_dir);
  const Eigen::VectorXd x = io::read_vector_csv(x_path);
  auto outputs = run_workers(code, x);
  const auto& p = code.params;

  Eigen::VectorXd result;
  if (errors || !corrupt.empty()) {
    for (auto i : io::parse_index_list(corrupt)) {
      if (i >= p.P) throw ValidationError("--corrupt index out of range");
      outputs[i].value += corrupt_by;
    }
    result = decode_with_errors(outputs, errors.value_or((p.P - p.K) / 2), code.generator, p);
  } else {
    const auto order = io::parse_index_list(responders);
    if (order.size() < p.K) {
      throw ValidationError("need at least K=" + std::to_string(p.K) + " responders, got " + std::to_string(order.size()));
    }
    std::vector<WorkerOutput> chosen;
    for (std::size_t i = 0; i < p.K; ++i) {
      if (order[i] >= p.P) throw ValidationError("responder index out of range");
      chosen.push_back(outputs[order[i]]);
    }
    result = decode(chosen, code.generator, p);
  }
  std::ostringstream text;
  io::write_vector_csv(text, result);
  emit(c, text.str());
  return 0;
}

int cmd_sweep(const Common& c, std::optional<std::size_t> m_first, std::optional<std::size_t> m_last, unsigned threads) {
  experiments::SweepConfig cfg;
  cfg.P = c.p.value_or(100);
  cfg.N = c.n.value_or(cfg.P);
  cfg.m_first = m_first.value_or(1);
  cfg.m_last = m_last.value_or(0);
  if (c.strategy) cfg.strategies = parse_strategy_list(*c.strategy);
  cfg.K = parse_k(c);
  cfg.s = c.s;
  cfg.model.mu = c.mu;
  cfg.trials = c.trials.value_or(0);
  cfg.seed = c.seed;
  cfg.threads = threads;
  const auto rows = experiments::run_sweep(cfg);

  std::ostringstream csv;
  experiments::write_sweep_csv(csv, rows);
  if (!c.out) {
    std::cout << csv.str();
    return 0;
  }
  const fs::path dir(*c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  std::ofstream f(dir / "sweep.csv");
  std::ofstream script(dir / "plot_sweep.py");
  if (!f || !script || !(f << csv.str()) || !(script << experiments::sweep_plot_script("sweep.csv", "sweep.png"))) {
    throw IoError("cannot write sweep outputs in " + dir.string());
  }
  std::cout << "wrote " << (dir / "sweep.csv").string() << " and " << (dir / "plot_sweep.py").string() << '\n';
  return 0;
}

int cmd_theorem4(const Common& c, const std::string& p_list) {
  std::vector<std::size_t> Ps;
  std::stringstream in(p_list);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      Ps.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw ValidationError("--p-list entries must be integers, got '" + item + "'");
    }
  }
  const auto rows = straggler::scaling_regime(Ps, straggler::DelayModel{c.mu});
  std::ostringstream csv;
  csv << "# M = round(P / ln P), K = P - round(M / 2), mu=" << fmt(c.mu) << '\n';
  experiments::write_scaling_csv(csv, rows);
  emit(c, csv.str());
  return 0;
}

int cmd_bounds(const Common& c, const std::string& input) {
  const std::size_t P = need(c.p, "--p");
  const auto K = parse_k(c);
  if (!K) throw ValidationError("bounds needs an integer --k");

  Eigen::MatrixXd A;
  if (!input.empty()) {
    A = io::read_matrix_csv(input);
  } else {
    const std::size_t M = need(c.m, "--m");
    const std::size_t N = need(c.n, "--n");
    A.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(N));
    rng::Stream st(c.seed, 0);
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      for (Eigen::Index j = 0; j < A.cols(); ++j) A(i, j) = st.normal();
    }
  }
  const auto params = validate_params(P, *K, static_cast<std::size_t>(A.rows()), static_cast<std::size_t>(A.cols()));
  const auto code = encode(A, build_generator(params, {}), params);
  const auto r = bounds::check_achievability(code);

  std::ostringstream out;
  out << "quantity,value\n";
  out << "P," << P << "\nK," << *K << "\nM," << params.M << "\nN," << params.N << "\nN_raw," << params.n_raw << '\n';
  out << "basic_bound," << fmt(r.basic_bound) << '\n';
  out << "tight_bound," << fmt(r.tight_bound) << '\n';
  out << "budget," << r.budget << '\n';
  out << "achieved_avg_sparsity," << fmt(r.achieved_avg_sparsity) << '\n';
  out << "achieved_max_sparsity," << r.achieved_max_sparsity << '\n';
  out << "budget_minus_tight," << bounds::tight_bound_gap(P, *K, params.M) << '\n';
  out << "lambda_cap," << r.lambda_cap << '\n';
  out << "gap_ratio," << fmt(r.gap_ratio) << '\n';
  out << "asymptotic_condition_met," << (r.asymptotic_condition_met ? "yes" : "no") << '\n';
  out << "hypothesis_holds," << (r.hypothesis_holds ? "yes" : "no") << '\n';
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  emit(c, out.str());
  return 0;
}

int cmd_experiment_sec6(const Common& c, unsigned threads) {
  const auto result = experiments::run_cluster_comparison(c.seed, c.trials.value_or(1000000), straggler::DelayModel{c.mu}, threads);
  std::ostringstream csv;
  experiments::write_comparison_csv(csv, result, c.seed);
  emit(c, csv.str());
  return 0;
}

int cmd_selftest() {
  const auto params = validate_params(6, 4, 2, 12);
  Eigen::MatrixXd A(2, 12);
  rng::Stream st(3, 0);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = st.normal();
  Eigen::VectorXd x(12);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = st.normal();
  const auto code = encode(A, build_generator(params, {}), params);
  auto outputs = run_workers(code, x);
  const Eigen::VectorXd want = A * x;
  outputs.erase(outputs.begin(), outputs.begin() + 2);
  const double err = (decode(outputs, code.generator, params) - want).norm() / want.norm();
  const double sd = straggler::expected_time_short_dot(6, 5, 3, 12, straggler::DelayModel{});
  const bool ok = err <= 1e-8 && std::abs(sd - 10.32) < 1e-9;
  std::cout << "decode_rel_error=" << err << " short_dot(6,5,3,12)=" << fmt(sd) << (ok ? " ok\n" : " FAILED\n");
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Short-Dot coded computation: encode, decode, strategy latency experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; flags on the command line win");

  Common c;
  app.add_option("--p", c.p, "number of processors P");
  app.add_option("--k", c.k, "recovery threshold K (or 'auto' in sweep)");
  app.add_option("--m", c.m, "number of dot products M");
  app.add_option("--n", c.n, "input length N");
  app.add_option("--mu", c.mu, "straggling parameter mu")->capture_default_str();
  app.add_option("--trials", c.trials, "Monte Carlo trials");
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--strategy", c.strategy, "comma-separated strategies: uncoded,repetition,mds,short-mds,short-dot");
  app.add_option("--s", c.s, "target task length for block strategies");
  app.add_option("--out", c.out, "output file or directory");

  std::string input, kind = "vandermonde", code_dir, x_path, responders, corrupt, p_list = "1000,10000,100000,1000000";
  std::uint64_t gen_seed = 0;
  std::optional<std::size_t> errors, m_first, m_last;
  double corrupt_by = 1000.0;
  unsigned threads = 0;

  auto* enc = app.add_subcommand("encode", "encode an M x N matrix CSV into a Short-Dot code directory");
  enc->add_option("--input", input, "matrix CSV")->required();
  enc->add_option("--generator", kind, "vandermonde or gaussian")->capture_default_str();
  enc->add_option("--gen-seed", gen_seed, "seed of the gaussian generator");

  auto* tr = app.add_subcommand("transform", "run all workers on x and decode A x");
  tr->add_option("--code", code_dir, "code directory written by encode")->required();
  tr->add_option("--x", x_path, "input vector CSV")->required();
  tr->add_option("--responders", responders, "1-based worker indices in finishing order");
  tr->add_option("--errors", errors, "decode from all outputs tolerating this many corrupted ones");
  tr->add_option("--corrupt", corrupt, "1-based workers whose outputs are corrupted (error decoding)");
  tr->add_option("--corrupt-by", corrupt_by, "value added to corrupted outputs")->capture_default_str();

  auto* sw = app.add_subcommand("sweep", "expected completion time against M for each strategy");
  sw->add_option("--m-first", m_first, "first M (default 1)");
  sw->add_option("--m-last", m_last, "last M (default P)");
  sw->add_option("--threads", threads, "Monte Carlo threads (default SHORTDOT_THREADS or all cores)");

  auto* th = app.add_subcommand("theorem4", "scaled times and speed-up ratios for M = P / ln P");
  th->add_option("--p-list", p_list, "comma-separated processor counts")->capture_default_str();

  auto* bd = app.add_subcommand("bounds", "sparsity lower bounds and the achieved Short-Dot sparsity");
  bd->add_option("--input", input, "matrix CSV (default: gaussian M x N from --seed)");

  auto* ex = app.add_subcommand("experiment-sec6", "simulated P=20, M=10, N=785 comparison");
  ex->add_option("--threads", threads, "Monte Carlo threads");

  auto* st = app.add_subcommand("selftest", "quick end-to-end check");

  for (auto* sub : {enc, tr, sw, th, bd, ex, st}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*enc) return cmd_encode(c, input, kind, gen_seed);
    if (*tr) return cmd_transform(c, code_dir, x_path, responders, errors, corrupt, corrupt_by);
    if (*sw) return cmd_sweep(c, m_first, m_last, threads);
    if (*th) return cmd_theorem4(c, p_list);
    if (*bd) return cmd_bounds(c, input);
    if (*ex) return cmd_experiment_sec6(c, threads);
    if (*st) return cmd_selftest();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
