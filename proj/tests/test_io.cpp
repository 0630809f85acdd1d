#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "shortdot/errors.hpp"
#include "shortdot/io.hpp"

using namespace shortdot;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("shortdot_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("matrix CSV round trip is exact") {
  std::mt19937_64 gen(1);
  const Eigen::MatrixXd m = oracle::random_matrix(gen, 4, 7) * 1e-3;
  std::stringstream s;
  io::write_matrix_csv(s, m);
  CHECK(io::parse_matrix_csv(s, "mem") == m);
}

TEST_CASE("malformed CSV") {
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(io::parse_matrix_csv(ragged, "ragged"), IoError);
  std::istringstream text("1,abc\n");
  CHECK_THROWS_AS(io::parse_matrix_csv(text, "text"), IoError);
  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(io::parse_matrix_csv(empty, "empty"), IoError);
  std::istringstream nan("1,nan\n");
  CHECK_THROWS_AS(io::parse_matrix_csv(nan, "nan"), IoError);
  CHECK_THROWS_AS(io::read_matrix_csv("/nonexistent/file.csv"), IoError);
}

TEST_CASE("vector CSV accepts a row or a column") {
  const auto dir = scratch("vec");
  std::ofstream(dir / "row.csv") << "1,2,3\n";
  std::ofstream(dir / "col.csv") << "1\n2\n3\n";
  std::ofstream(dir / "mat.csv") << "1,2\n3,4\n";
  const Eigen::Vector3d want(1, 2, 3);
  CHECK(io::read_vector_csv(dir / "row.csv") == want);
  CHECK(io::read_vector_csv(dir / "col.csv") == want);
  CHECK_THROWS_AS(io::read_vector_csv(dir / "mat.csv"), IoError);
}

TEST_CASE("index lists are 1-based") {
  CHECK(io::parse_index_list("1,3,5") == std::vector<std::size_t>{0, 2, 4});
  CHECK(io::parse_index_list(" 2 4\t6 ") == std::vector<std::size_t>{1, 3, 5});
  CHECK(io::parse_index_list("").empty());
  CHECK_THROWS_AS(io::parse_index_list("0,1"), ValidationError);
  CHECK_THROWS_AS(io::parse_index_list("1,x"), ValidationError);
}

TEST_CASE("transform directory round trip") {
  std::mt19937_64 gen(2);
  for (auto kind : {GeneratorKind::Vandermonde, GeneratorKind::Gaussian}) {
    const auto params = validate_params(5, 4, 2, 13);
    GeneratorSpec spec;
    spec.kind = kind;
    spec.seed = 99;
    const auto code = encode(oracle::random_matrix(gen, 2, 13), build_generator(params, spec), params);
    const auto dir = scratch(std::string(to_string(kind)));
    io::save_transform(code, dir);
    const auto back = io::load_transform(dir);
    CHECK(back.params == code.params);
    CHECK(back.F == code.F);
    CHECK(back.supports == code.supports);
    CHECK(back.generator.entries == code.generator.entries);
    CHECK(back.zero_tolerance == code.zero_tolerance);

    std::ifstream params_file(dir / "params.txt");
    std::string text((std::istreambuf_iterator<char>(params_file)), {});
    CHECK(text.find("N=15") != std::string::npos);
    CHECK(text.find("N_raw=13") != std::string::npos);
  }
}

TEST_CASE("corrupted transform directories are rejected") {
  std::mt19937_64 gen(3);
  const auto params = validate_params(4, 3, 1, 8);
  const auto code = encode(oracle::random_matrix(gen, 1, 8), build_generator(params, {}), params);
  const auto dir = scratch("bad");
  io::save_transform(code, dir);
  std::ofstream(dir / "supports.txt") << "1 2\n";
  CHECK_THROWS_AS(io::load_transform(dir), IoError);
  io::save_transform(code, dir);
  std::ofstream(dir / "F.csv") << "1,2\n";
  CHECK_THROWS_AS(io::load_transform(dir), IoError);
  io::save_transform(code, dir);
  std::ofstream(dir / "params.txt") << "P=4\nK=3\n";
  CHECK_THROWS_AS(io::load_transform(dir), IoError);
  CHECK_THROWS_AS(io::load_transform(dir / "missing"), IoError);
}
