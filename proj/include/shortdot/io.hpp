#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "shortdot/coding.hpp"

namespace shortdot::io {

/// Row-major CSV, no header. Throws IoError on unreadable files and on
/// ragged or non-numeric rows.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
Eigen::MatrixXd parse_matrix_csv(std::istream& in, std::string_view name);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);

/// A single row or a single column.
Eigen::VectorXd read_vector_csv(const std::filesystem::path& path);
/// One value per line.
void write_vector_csv(std::ostream& out, const Eigen::VectorXd& vector);

/// Directory layout: params.txt (key=value), F.csv, supports.txt (1-based
/// column indices, space-separated, one row of F per line).
void save_transform(const EncodedTransform& code, const std::filesystem::path& dir);
EncodedTransform load_transform(const std::filesystem::path& dir);

/// "1,3,5" or "1 3 5" (1-based) to 0-based indices.
std::vector<std::size_t> parse_index_list(std::string_view text);

}  // namespace shortdot::io
