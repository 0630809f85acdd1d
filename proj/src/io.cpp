#include "shortdot/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "shortdot/errors.hpp"

namespace shortdot::io {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, std::string_view where) {
  const std::string text(trim(token));
  if (text.empty()) throw IoError(std::string(where) + ": empty field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw IoError(std::string(where) + ": not a finite number: '" + text + "'");
  }
  return v;
}

std::size_t parse_size(std::string_view token, std::string_view where) {
  const std::string text(trim(token));
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || text[0] == '-' || end != text.c_str() + text.size() || errno == ERANGE) {
    throw IoError(std::string(where) + ": not a non-negative integer: '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  return out;
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
  auto in = open_in(path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw IoError(path.string() + ": expected key=value, got '" + std::string(t) + "'");
    kv[std::string(trim(t.substr(0, eq)))] = std::string(trim(t.substr(eq + 1)));
  }
  return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key,
                           const fs::path& path) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw IoError(path.string() + ": missing key '" + key + "'");
  return it->second;
}

}  // namespace

Eigen::MatrixXd parse_matrix_csv(std::istream& in, std::string_view name) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = std::string(name) + ":" + std::to_string(line_no);
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_double(rest.substr(0, comma), where));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(where + ": ragged row (" + std::to_string(row.size()) + " fields, expected " +
                    std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(std::string(name) + ": no data");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  auto in = open_in(path);
  return parse_matrix_csv(in, path.string());
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix) {
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(matrix(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& matrix) {
  auto out = open_out(path);
  write_matrix_csv(out, matrix);
  if (!out) throw IoError("failed writing " + path.string());
}

Eigen::VectorXd read_vector_csv(const fs::path& path) {
  const Eigen::MatrixXd m = read_matrix_csv(path);
  if (m.rows() != 1 && m.cols() != 1) {
    throw IoError(path.string() + ": expected a single row or column, got " + std::to_string(m.rows()) + "x" +
                  std::to_string(m.cols()));
  }
  return m.rows() == 1 ? Eigen::VectorXd(m.row(0).transpose()) : Eigen::VectorXd(m.col(0));
}

void write_vector_csv(std::ostream& out, const Eigen::VectorXd& vector) {
  for (Eigen::Index i = 0; i < vector.size(); ++i) out << format_double(vector(i)) << '\n';
}

void save_transform(const EncodedTransform& code, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const auto& p = code.params;
  {
    auto out = open_out(dir / "params.txt");
    out << "P=" << p.P << "\nK=" << p.K << "\nM=" << p.M << "\nN=" << p.N << "\nN_raw=" << p.n_raw << '\n';
    out << "kind=" << to_string(code.generator.kind) << '\n';
    out << "seed=" << code.generator.seed << '\n';
    out << "nodes=";
    for (std::size_t i = 0; i < code.generator.nodes.size(); ++i) {
      if (i > 0) out << ',';
      out << format_double(code.generator.nodes[i]);
    }
    out << "\nzero_tolerance=" << format_double(code.zero_tolerance) << '\n';
    if (!out) throw IoError("failed writing params.txt in " + dir.string());
  }
  write_matrix_csv(dir / "F.csv", code.F);
  {
    auto out = open_out(dir / "supports.txt");
    for (const auto& support : code.supports) {
      for (std::size_t i = 0; i < support.size(); ++i) out << (i > 0 ? " " : "") << support[i] + 1;
      out << '\n';
    }
    if (!out) throw IoError("failed writing supports.txt in " + dir.string());
  }
}

EncodedTransform load_transform(const fs::path& dir) {
  const auto params_path = dir / "params.txt";
  const auto kv = read_key_values(params_path);
  auto size_of = [&](const std::string& key) { return parse_size(require(kv, key, params_path), params_path.string()); };

  EncodedTransform code;
  code.params = validate_params(size_of("P"), size_of("K"), size_of("M"), size_of("N_raw"));
  if (code.params.N != size_of("N")) throw IoError(params_path.string() + ": N is inconsistent with N_raw and P");

  const auto kind = parse_generator_kind(require(kv, "kind", params_path));
  if (kind == GeneratorKind::Gaussian) {
    const auto seed = static_cast<std::uint64_t>(parse_size(require(kv, "seed", params_path), params_path.string()));
    code.generator = gaussian_generator(code.params.P, code.params.K, seed);
  } else {
    std::vector<double> nodes;
    std::string_view rest(require(kv, "nodes", params_path));
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      nodes.push_back(parse_double(rest.substr(0, comma), params_path.string()));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (nodes.size() != code.params.P) throw IoError(params_path.string() + ": expected P nodes");
    code.generator = vandermonde_generator(nodes, code.params.K);
  }
  code.zero_tolerance = parse_double(require(kv, "zero_tolerance", params_path), params_path.string());

  code.F = read_matrix_csv(dir / "F.csv");
  if (static_cast<std::size_t>(code.F.rows()) != code.params.P ||
      static_cast<std::size_t>(code.F.cols()) != code.params.N) {
    throw IoError((dir / "F.csv").string() + ": shape does not match params.txt");
  }

  const auto supports_path = dir / "supports.txt";
  auto in = open_in(supports_path);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      code.supports.push_back(parse_index_list(line));
    } catch (const ValidationError& e) {
      throw IoError(supports_path.string() + ": " + e.what());
    }
  }
  if (code.supports.size() != code.params.P) throw IoError(supports_path.string() + ": expected P rows");
  for (std::size_t i = 0; i < code.params.P; ++i) {
    if (code.supports[i] != row_support(i, code.params)) {
      throw IoError(supports_path.string() + ": row " + std::to_string(i + 1) + " does not match the sparsity pattern");
    }
  }
  return code;
}

std::vector<std::size_t> parse_index_list(std::string_view text) {
  std::vector<std::size_t> out;
  std::string normalized(text);
  for (char& c : normalized) {
    if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
  }
  std::istringstream in(normalized);
  std::string token;
  while (in >> token) {
    std::size_t v = 0;
    try {
      v = parse_size(token, "index list");
    } catch (const IoError& e) {
      throw ValidationError(e.what());
    }
    if (v == 0) throw ValidationError("indices are 1-based; got 0");
    out.push_back(v - 1);
  }
  return out;
}

}  // namespace shortdot::io
