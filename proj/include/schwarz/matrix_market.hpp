#pragma once

// Matrix Market coordinate (matrices) and array (vectors) I/O.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "schwarz/sparse.hpp"

namespace schwarz {

void write_matrix_market(std::ostream& out, const SparseMatrix& A);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& A);

/// Reads "coordinate real|integer|pattern general|symmetric". Symmetric files
/// are expanded to both triangles.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

void write_matrix_market_vector(std::ostream& out, std::span<const double> v);
void write_matrix_market_vector(const std::filesystem::path& path, std::span<const double> v);
std::vector<double> read_matrix_market_vector(std::istream& in);

}  // namespace schwarz
