#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = SHORTDOT_CLI;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("shortdot_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = kCli + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_csv(const fs::path& p, const Eigen::MatrixXd& m) {
  std::ofstream out(p);
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
}

Eigen::VectorXd read_column(const fs::path& p) {
  std::ifstream in(p);
  std::vector<double> v;
  double x;
  while (in >> x) v.push_back(x);
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string responders(std::vector<std::size_t> order) {
  std::string s;
  for (auto i : order) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
  return s;
}

}  // namespace

TEST_CASE("encode then transform equals the dense product (fuzz)") {
  std::mt19937_64 gen(2718);
  const auto dir = scratch("fuzz");
  for (int t = 0; t < 100; ++t) {
    std::uniform_int_distribution<std::size_t> pick_p(1, 8);
    const std::size_t P = pick_p(gen);
    const std::size_t K = std::uniform_int_distribution<std::size_t>(1, P)(gen);
    const std::size_t M = std::uniform_int_distribution<std::size_t>(1, K)(gen);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3 * P + 2)(gen);
    const Eigen::MatrixXd A = oracle::random_matrix(gen, static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd x = oracle::random_vector(gen, static_cast<Eigen::Index>(n));
    write_csv(dir / "A.csv", A);
    write_csv(dir / "x.csv", x.transpose());
    std::vector<std::size_t> order(P);
    for (std::size_t i = 0; i < P; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), gen);

    CAPTURE(t);
    CAPTURE(P);
    CAPTURE(K);
    CAPTURE(M);
    CAPTURE(n);
    REQUIRE(run("encode --input " + (dir / "A.csv").string() + " --p " + std::to_string(P) + " --k " +
                    std::to_string(K) + " --out " + (dir / "code").string(),
                dir / "log") == 0);
    REQUIRE(run("transform --code " + (dir / "code").string() + " --x " + (dir / "x.csv").string() +
                    " --responders " + responders(order) + " --out " + (dir / "y.csv").string(),
                dir / "log") == 0);
    CHECK(oracle::rel_error(read_column(dir / "y.csv"), oracle::matvec(A, x)) <= 1e-8);
  }
}

TEST_CASE("transform examples") {
  std::mt19937_64 gen(1);
  const auto dir = scratch("tr");
  const Eigen::MatrixXd A = oracle::random_matrix(gen, 3, 12);
  const Eigen::VectorXd x = oracle::random_vector(gen, 12);
  write_csv(dir / "A.csv", A);
  write_csv(dir / "x.csv", x);
  REQUIRE(run("encode --input " + (dir / "A.csv").string() + " --p 6 --k 5 --out " + (dir / "code").string(),
              dir / "log") == 0);
  CHECK(slurp(dir / "log").find("s=8") != std::string::npos);
  const auto F = [&] {
    std::ifstream in(dir / "code" / "F.csv");
    std::string line;
    std::size_t worst = 0;
    while (std::getline(in, line)) {
      std::size_t nz = 0;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) nz += std::stod(cell) != 0.0;
      worst = std::max(worst, nz);
    }
    return worst;
  }();
  CHECK(F <= 8);

  const std::string code = " --code " + (dir / "code").string() + " --x " + (dir / "x.csv").string();
  REQUIRE(run("transform" + code + " --responders 1,2,3,4,5 --out " + (dir / "a.csv").string(), dir / "log") == 0);
  REQUIRE(run("transform" + code + " --responders 2,3,4,5,6 --out " + (dir / "b.csv").string(), dir / "log") == 0);
  CHECK(oracle::rel_error(read_column(dir / "a.csv"), read_column(dir / "b.csv")) <= 1e-10);
  CHECK(run("transform" + code + " --responders 1,2,3", dir / "log") == 2);

  // K = 4 leaves room for one corrupted output.
  REQUIRE(run("encode --input " + (dir / "A.csv").string() + " --p 7 --k 4 --out " + (dir / "code4").string(),
              dir / "log") == 0);
  REQUIRE(run("transform --code " + (dir / "code4").string() + " --x " + (dir / "x.csv").string() +
                  " --corrupt 3 --out " + (dir / "c.csv").string(),
              dir / "log") == 0);
  CHECK(oracle::rel_error(read_column(dir / "c.csv"), oracle::matvec(A, x)) <= 1e-8);

  write_csv(dir / "z.csv", Eigen::MatrixXd::Zero(1, 4));
  REQUIRE(run("encode --input " + (dir / "z.csv").string() + " --p 2 --k 2 --out " + (dir / "zero").string(), dir / "log") == 0);
  CHECK(slurp(dir / "zero" / "F.csv") == "0,0,0,0\n0,0,0,0\n");

  write_csv(dir / "wide.csv", oracle::random_matrix(gen, 2, 785));
  REQUIRE(run("encode --input " + (dir / "wide.csv").string() + " --p 20 --k 18 --out " + (dir / "wide").string(),
              dir / "log") == 0);
  const auto params = slurp(dir / "wide" / "params.txt");
  CHECK(params.find("N=800\n") != std::string::npos);
  CHECK(params.find("N_raw=785\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  write_csv(dir / "A.csv", Eigen::MatrixXd::Ones(3, 6));
  std::ofstream(dir / "bad.csv") << "1,2\nfoo\n";
  CHECK(run("selftest", dir / "log") == 0);
  CHECK(run("encode --input " + (dir / "A.csv").string() + " --p 4 --k 2 --out " + (dir / "c").string(), dir / "log") == 2);
  CHECK(run("encode --input " + (dir / "missing.csv").string() + " --p 4 --k 3 --out " + (dir / "c").string(), dir / "log") == 4);
  CHECK(run("encode --input " + (dir / "bad.csv").string() + " --p 4 --k 3 --out " + (dir / "c").string(), dir / "log") == 4);
  CHECK(run("sweep --p 10 --mu -1", dir / "log") == 2);
  CHECK(run("frobnicate", dir / "log") == 2);
  CHECK(run("", dir / "log") == 2);
  // Vandermonde on 40 Chebyshev nodes with K = 40 trips the condition guard.
  write_csv(dir / "big.csv", Eigen::MatrixXd::Ones(1, 40));
  CHECK(run("encode --input " + (dir / "big.csv").string() + " --p 40 --k 40 --out " + (dir / "c").string(), dir / "log") == 3);
}

TEST_CASE("config file with flag override") {
  const auto dir = scratch("cfg");
  std::ofstream(dir / "run.cfg") << "p=10\nmu=5\nstrategy=mds\n";
  REQUIRE(run("sweep --config " + (dir / "run.cfg").string() + " --out " + (dir / "a").string(), dir / "log") == 0);
  const auto a = slurp(dir / "a" / "sweep.csv");
  CHECK(std::count(a.begin(), a.end(), '\n') == 11);
  CHECK(fs::exists(dir / "a" / "plot_sweep.py"));
  REQUIRE(run("sweep --config " + (dir / "run.cfg").string() + " --p 5", dir / "log") == 0);
  const auto b = slurp(dir / "log");
  CHECK(std::count(b.begin(), b.end(), '\n') == 6);
}

TEST_CASE("deterministic CSV outputs") {
  const auto dir = scratch("det");
  REQUIRE(run("sweep --p 8 --trials 500 --seed 3 --out " + (dir / "a").string(), dir / "log") == 0);
  REQUIRE(run("sweep --p 8 --trials 500 --seed 3 --out " + (dir / "b").string(), dir / "log") == 0);
  CHECK(slurp(dir / "a" / "sweep.csv") == slurp(dir / "b" / "sweep.csv"));
  REQUIRE(run("experiment-sec6 --trials 20000 --seed 4 --out " + (dir / "s.csv").string(), dir / "log") == 0);
  const auto sec = slurp(dir / "s.csv");
  CHECK(sec.find("simulated") != std::string::npos);
  REQUIRE(run("theorem4 --out " + (dir / "t.csv").string(), dir / "log") == 0);
  CHECK(slurp(dir / "t.csv").find("1000000,72382,963809") != std::string::npos);
  REQUIRE(run("bounds --p 6 --k 5 --m 3 --n 12", dir / "log") == 0);
  const auto bounds = slurp(dir / "log");
  CHECK(bounds.find("basic_bound,4\n") != std::string::npos);
  CHECK(bounds.find("tight_bound,-22\n") != std::string::npos);
  CHECK(bounds.find("lambda_cap,60\n") != std::string::npos);
}
