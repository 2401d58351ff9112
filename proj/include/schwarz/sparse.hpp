#pragma once

/// @file sparse.hpp
/// @brief CSR matrices, sorted index sets and the handful of sparse kernels
/// the Schwarz machinery needs (slicing, mat-vec, products, Galerkin triple
/// products).

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace schwarz {

/// Sentinel for "not present" in index maps.
inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Sorted, duplicate-free list of global indices.
class IndexSet {
public:
    IndexSet() = default;

    /// Takes ownership of an already sorted unique list; throws otherwise.
    explicit IndexSet(std::vector<std::size_t> sorted_unique);

    /// Sorts and deduplicates.
    static IndexSet from_unsorted(std::vector<std::size_t> indices);

    /// {0, 1, ..., n-1}
    static IndexSet range(std::size_t n);

    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    std::size_t operator[](std::size_t k) const { return indices_[k]; }
    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }
    std::span<const std::size_t> indices() const { return indices_; }

    bool contains(std::size_t i) const;

    /// Position of global index i in the set, or npos.
    std::size_t position(std::size_t i) const;

    /// Dense global-to-local map of length n (npos for absent indices).
    std::vector<std::size_t> local_map(std::size_t n) const;

    /// Throws std::invalid_argument if any index is >= n.
    void check_bound(std::size_t n) const;

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<std::size_t> indices_;
};

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Compressed sparse row matrix. Immutable once built.
///
/// Invariants (checked on construction): row offsets are nondecreasing with
/// nrows+1 entries ending at nnz, column indices are strictly increasing
/// within each row and below ncols. Explicit zeros are allowed and kept.
class SparseMatrix {
public:
    SparseMatrix() : row_offsets_(1, 0) {}
    SparseMatrix(std::size_t nrows, std::size_t ncols,
                 std::vector<std::size_t> row_offsets,
                 std::vector<std::size_t> col_indices,
                 std::vector<double> values);

    /// Duplicate (row, col) entries are summed. Entries that sum to zero stay
    /// in the pattern.
    static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                      std::span<const Triplet> triplets);
    static SparseMatrix identity(std::size_t n);
    static SparseMatrix zero(std::size_t nrows, std::size_t ncols);

    std::size_t rows() const { return nrows_; }
    std::size_t cols() const { return ncols_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const std::size_t> row_offsets() const { return row_offsets_; }
    std::span<const std::size_t> col_indices() const { return col_indices_; }
    std::span<const double> values() const { return values_; }

    std::span<const std::size_t> row_cols(std::size_t i) const {
        return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
    }
    std::span<const double> row_values(std::size_t i) const {
        return {values_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
    }

    /// Stored value at (i, j), zero when not stored.
    double coeff(std::size_t i, std::size_t j) const;

    double max_abs() const;

    SparseMatrix scaled(double factor) const;

    std::vector<Triplet> to_triplets() const;

private:
    std::size_t nrows_ = 0;
    std::size_t ncols_ = 0;
    std::vector<std::size_t> row_offsets_;
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

/// A(rows, cols) with local contiguous indexing.
SparseMatrix extract_submatrix(const SparseMatrix& A, const IndexSet& rows, const IndexSet& cols);

/// y = A x, each row summed left to right in storage order.
std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x);
void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y);

SparseMatrix transpose(const SparseMatrix& A);

/// Sparse-sparse product A B.
SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B);

/// alpha A + beta B over the union pattern.
SparseMatrix add(const SparseMatrix& A, const SparseMatrix& B, double alpha = 1.0, double beta = 1.0);

/// Galerkin product Pᵀ A P with P stored fine-by-coarse. When A is symmetric
/// the result is symmetrized by averaging (i,j) and (j,i).
SparseMatrix triple_product(const SparseMatrix& P, const SparseMatrix& A);

/// True if A is square and |A_ij - A_ji| <= rel_tol * max|A| everywhere.
bool is_symmetric(const SparseMatrix& A, double rel_tol = 0.0);

/// Row sums A·1.
std::vector<double> row_sums(const SparseMatrix& A);

}  // namespace schwarz
