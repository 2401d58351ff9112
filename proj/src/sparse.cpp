#include "schwarz/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace schwarz {

// ---------------------------------------------------------------------------
// IndexSet
// ---------------------------------------------------------------------------

IndexSet::IndexSet(std::vector<std::size_t> sorted_unique) : indices_(std::move(sorted_unique)) {
    for (std::size_t k = 1; k < indices_.size(); ++k) {
        if (indices_[k - 1] >= indices_[k]) {
            throw std::invalid_argument("IndexSet: indices must be sorted and unique");
        }
    }
}

IndexSet IndexSet::from_unsorted(std::vector<std::size_t> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return IndexSet(std::move(indices));
}

IndexSet IndexSet::range(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return IndexSet(std::move(idx));
}

bool IndexSet::contains(std::size_t i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

std::size_t IndexSet::position(std::size_t i) const {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), i);
    if (it == indices_.end() || *it != i) return npos;
    return static_cast<std::size_t>(it - indices_.begin());
}

std::vector<std::size_t> IndexSet::local_map(std::size_t n) const {
    check_bound(n);
    std::vector<std::size_t> map(n, npos);
    for (std::size_t k = 0; k < indices_.size(); ++k) map[indices_[k]] = k;
    return map;
}

void IndexSet::check_bound(std::size_t n) const {
    if (!indices_.empty() && indices_.back() >= n) {
        throw std::invalid_argument("IndexSet: index " + std::to_string(indices_.back()) +
                                    " out of range for dimension " + std::to_string(n));
    }
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    std::vector<std::size_t> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IndexSet(std::move(out));
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
    std::vector<std::size_t> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IndexSet(std::move(out));
}

// ---------------------------------------------------------------------------
// SparseMatrix
// ---------------------------------------------------------------------------

SparseMatrix::SparseMatrix(std::size_t nrows, std::size_t ncols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices,
                           std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
    if (row_offsets_.size() != nrows_ + 1 || row_offsets_.front() != 0 ||
        row_offsets_.back() != values_.size() || col_indices_.size() != values_.size()) {
        throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
    }
    for (std::size_t i = 0; i < nrows_; ++i) {
        if (row_offsets_[i] > row_offsets_[i + 1]) {
            throw std::invalid_argument("SparseMatrix: row offsets must be nondecreasing");
        }
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            if (col_indices_[k] >= ncols_) {
                throw std::invalid_argument("SparseMatrix: column index out of range");
            }
            if (k > row_offsets_[i] && col_indices_[k - 1] >= col_indices_[k]) {
                throw std::invalid_argument("SparseMatrix: column indices must be strictly increasing");
            }
        }
    }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t nrows, std::size_t ncols,
                                         std::span<const Triplet> triplets) {
    std::vector<std::size_t> counts(nrows + 1, 0);
    for (const auto& t : triplets) {
        if (t.row >= nrows || t.col >= ncols) {
            throw std::invalid_argument("SparseMatrix::from_triplets: entry (" + std::to_string(t.row) +
                                        ", " + std::to_string(t.col) + ") out of range");
        }
        ++counts[t.row + 1];
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());

    // Bucket by row, stable so duplicate summation order follows input order.
    std::vector<std::size_t> order(triplets.size());
    std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
    for (std::size_t k = 0; k < triplets.size(); ++k) order[fill[triplets[k].row]++] = k;

    std::vector<std::size_t> offsets(nrows + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    cols.reserve(triplets.size());
    vals.reserve(triplets.size());
    std::vector<std::size_t> row_order;
    for (std::size_t i = 0; i < nrows; ++i) {
        row_order.assign(order.begin() + static_cast<std::ptrdiff_t>(counts[i]),
                         order.begin() + static_cast<std::ptrdiff_t>(counts[i + 1]));
        std::stable_sort(row_order.begin(), row_order.end(), [&](std::size_t a, std::size_t b) {
            return triplets[a].col < triplets[b].col;
        });
        for (std::size_t k : row_order) {
            if (!cols.empty() && offsets[i] < cols.size() && cols.back() == triplets[k].col) {
                vals.back() += triplets[k].value;
            } else {
                cols.push_back(triplets[k].col);
                vals.push_back(triplets[k].value);
            }
        }
        offsets[i + 1] = cols.size();
    }
    return SparseMatrix(nrows, ncols, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<std::size_t> offsets(n + 1);
    std::iota(offsets.begin(), offsets.end(), std::size_t{0});
    std::vector<std::size_t> cols(n);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::zero(std::size_t nrows, std::size_t ncols) {
    return SparseMatrix(nrows, ncols, std::vector<std::size_t>(nrows + 1, 0), {}, {});
}

double SparseMatrix::coeff(std::size_t i, std::size_t j) const {
    if (i >= nrows_ || j >= ncols_) throw std::out_of_range("SparseMatrix::coeff: index out of range");
    auto c = row_cols(i);
    auto it = std::lower_bound(c.begin(), c.end(), j);
    if (it == c.end() || *it != j) return 0.0;
    return values_[row_offsets_[i] + static_cast<std::size_t>(it - c.begin())];
}

double SparseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

SparseMatrix SparseMatrix::scaled(double factor) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= factor;
    return SparseMatrix(nrows_, ncols_, row_offsets_, col_indices_, std::move(v));
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t i = 0; i < nrows_; ++i) {
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            out.push_back({i, col_indices_[k], values_[k]});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

SparseMatrix extract_submatrix(const SparseMatrix& A, const IndexSet& rows, const IndexSet& cols) {
    rows.check_bound(A.rows());
    const auto col_map = cols.local_map(A.cols());

    std::vector<std::size_t> offsets(rows.size() + 1, 0);
    std::vector<std::size_t> out_cols;
    std::vector<double> out_vals;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto rc = A.row_cols(rows[r]);
        auto rv = A.row_values(rows[r]);
        for (std::size_t k = 0; k < rc.size(); ++k) {
            const std::size_t local = col_map[rc[k]];
            if (local != npos) {
                out_cols.push_back(local);
                out_vals.push_back(rv[k]);
            }
        }
        offsets[r + 1] = out_cols.size();
    }
    return SparseMatrix(rows.size(), cols.size(), std::move(offsets), std::move(out_cols), std::move(out_vals));
}

void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y) {
    if (x.size() != A.cols() || y.size() != A.rows()) {
        throw std::invalid_argument("spmv: dimension mismatch (" + std::to_string(A.rows()) + "x" +
                                    std::to_string(A.cols()) + " times " + std::to_string(x.size()) + ")");
    }
    const auto offsets = A.row_offsets();
    const auto cols = A.col_indices();
    const auto vals = A.values();
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) sum += vals[k] * x[cols[k]];
        y[i] = sum;
    }
}

std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x) {
    std::vector<double> y(A.rows());
    spmv(A, x, y);
    return y;
}

SparseMatrix transpose(const SparseMatrix& A) {
    std::vector<std::size_t> offsets(A.cols() + 1, 0);
    for (std::size_t c : A.col_indices()) ++offsets[c + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    std::vector<std::size_t> cols(A.nnz());
    std::vector<double> vals(A.nnz());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        auto rc = A.row_cols(i);
        auto rv = A.row_values(i);
        for (std::size_t k = 0; k < rc.size(); ++k) {
            const std::size_t dst = fill[rc[k]]++;
            cols[dst] = i;
            vals[dst] = rv[k];
        }
    }
    return SparseMatrix(A.cols(), A.rows(), std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B) {
    if (A.cols() != B.rows()) {
        throw std::invalid_argument("multiply: inner dimensions differ (" + std::to_string(A.cols()) +
                                    " vs " + std::to_string(B.rows()) + ")");
    }
    std::vector<std::size_t> offsets(A.rows() + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    std::vector<double> acc(B.cols(), 0.0);
    std::vector<std::size_t> marker(B.cols(), npos);
    std::vector<std::size_t> row_pattern;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        row_pattern.clear();
        auto ac = A.row_cols(i);
        auto av = A.row_values(i);
        for (std::size_t ka = 0; ka < ac.size(); ++ka) {
            auto bc = B.row_cols(ac[ka]);
            auto bv = B.row_values(ac[ka]);
            for (std::size_t kb = 0; kb < bc.size(); ++kb) {
                const std::size_t j = bc[kb];
                if (marker[j] != i) {
                    marker[j] = i;
                    acc[j] = 0.0;
                    row_pattern.push_back(j);
                }
                acc[j] += av[ka] * bv[kb];
            }
        }
        std::sort(row_pattern.begin(), row_pattern.end());
        for (std::size_t j : row_pattern) {
            cols.push_back(j);
            vals.push_back(acc[j]);
        }
        offsets[i + 1] = cols.size();
    }
    return SparseMatrix(A.rows(), B.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix add(const SparseMatrix& A, const SparseMatrix& B, double alpha, double beta) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) {
        throw std::invalid_argument("add: dimension mismatch");
    }
    std::vector<std::size_t> offsets(A.rows() + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        auto ac = A.row_cols(i);
        auto av = A.row_values(i);
        auto bc = B.row_cols(i);
        auto bv = B.row_values(i);
        std::size_t ka = 0, kb = 0;
        while (ka < ac.size() || kb < bc.size()) {
            if (kb == bc.size() || (ka < ac.size() && ac[ka] < bc[kb])) {
                cols.push_back(ac[ka]);
                vals.push_back(alpha * av[ka]);
                ++ka;
            } else if (ka == ac.size() || bc[kb] < ac[ka]) {
                cols.push_back(bc[kb]);
                vals.push_back(beta * bv[kb]);
                ++kb;
            } else {
                cols.push_back(ac[ka]);
                vals.push_back(alpha * av[ka] + beta * bv[kb]);
                ++ka;
                ++kb;
            }
        }
        offsets[i + 1] = cols.size();
    }
    return SparseMatrix(A.rows(), A.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix triple_product(const SparseMatrix& P, const SparseMatrix& A) {
    if (A.rows() != A.cols() || P.rows() != A.cols()) {
        throw std::invalid_argument("triple_product: P must be " + std::to_string(A.cols()) +
                                    " x k for a square A");
    }
    SparseMatrix coarse = multiply(transpose(P), multiply(A, P));
    if (!is_symmetric(A)) return coarse;
    return add(coarse, transpose(coarse), 0.5, 0.5);
}

bool is_symmetric(const SparseMatrix& A, double rel_tol) {
    if (A.rows() != A.cols()) return false;
    const double tol = rel_tol * A.max_abs();
    const SparseMatrix At = transpose(A);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        auto ac = A.row_cols(i);
        auto av = A.row_values(i);
        auto tc = At.row_cols(i);
        auto tv = At.row_values(i);
        std::size_t ka = 0, kt = 0;
        while (ka < ac.size() || kt < tc.size()) {
            double a = 0.0, t = 0.0;
            if (kt == tc.size() || (ka < ac.size() && ac[ka] < tc[kt])) {
                a = av[ka++];
            } else if (ka == ac.size() || tc[kt] < ac[ka]) {
                t = tv[kt++];
            } else {
                a = av[ka++];
                t = tv[kt++];
            }
            if (std::abs(a - t) > tol) return false;
        }
    }
    return true;
}

std::vector<double> row_sums(const SparseMatrix& A) {
    std::vector<double> s(A.rows(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (double v : A.row_values(i)) s[i] += v;
    }
    return s;
}

}  // namespace schwarz
