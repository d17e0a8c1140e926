#pragma once

#include "rmgd/operators.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>

namespace rmgd {

/// Reads a Matrix Market coordinate file
/// (header "%%MatrixMarket matrix coordinate real general|symmetric",
/// 1-based indices). Symmetric files are expanded to full storage.
/// Throws parse_error with the file name and line number on malformed input.
CsrMatrix read_matrix_market(const std::filesystem::path& path);
CsrMatrix read_matrix_market(std::istream& in, const std::string& name);

/// Writes coordinate format. With symmetric=true the matrix must be square
/// and symmetric; only the lower triangle is stored.
void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& m,
                         bool symmetric);
void write_matrix_market(std::ostream& out, const CsrMatrix& m, bool symmetric);

/// Plain dense text: one whitespace-separated row per line.
Eigen::MatrixXd read_dense_text(const std::filesystem::path& path);
Eigen::MatrixXd read_dense_text(std::istream& in, const std::string& name);
void write_dense_text(const std::filesystem::path& path, const Eigen::MatrixXd& m);

} // namespace rmgd
