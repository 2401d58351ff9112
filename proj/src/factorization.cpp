#include "schwarz/factorization.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace schwarz {

namespace {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenSparse to_eigen(const SparseMatrix& A) {
    std::vector<Eigen::Triplet<double, int>> trips;
    trips.reserve(A.nnz());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        auto c = A.row_cols(i);
        auto v = A.row_values(i);
        for (std::size_t k = 0; k < c.size(); ++k) {
            trips.emplace_back(static_cast<int>(i), static_cast<int>(c[k]), v[k]);
        }
    }
    EigenSparse M(static_cast<int>(A.rows()), static_cast<int>(A.cols()));
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();
    return M;
}

}  // namespace

struct Factorization::Impl {
    Eigen::SimplicialLLT<EigenSparse, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
    Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>> lu;
};

Factorization::Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;
Factorization::~Factorization() = default;

Factorization factorize(const SparseMatrix& A, bool spd) {
    if (A.rows() != A.cols()) {
        throw std::invalid_argument("factorize: matrix is " + std::to_string(A.rows()) + "x" +
                                    std::to_string(A.cols()) + ", expected square");
    }
    const std::size_t n = A.rows();

    // Empty rows or columns make the matrix structurally singular.
    std::vector<bool> col_hit(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        bool row_hit = false;
        auto c = A.row_cols(i);
        auto v = A.row_values(i);
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (v[k] != 0.0) {
                row_hit = true;
                col_hit[c[k]] = true;
            }
        }
        if (!row_hit) {
            throw FactorizationError(FactorizationError::Kind::singular,
                                     "factorize: structurally singular (row " + std::to_string(i) + " is empty)");
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!col_hit[j]) {
            throw FactorizationError(FactorizationError::Kind::singular,
                                     "factorize: structurally singular (column " + std::to_string(j) + " is empty)");
        }
    }

    Factorization F;
    F.impl_ = std::make_unique<Factorization::Impl>();
    F.n_ = n;
    F.spd_ = spd;
    if (n == 0) return F;

    const EigenSparse M = to_eigen(A);
    if (spd) {
        F.impl_->llt.compute(M);
        if (F.impl_->llt.info() != Eigen::Success) {
            throw FactorizationError(FactorizationError::Kind::not_spd,
                                     "factorize: matrix is not SPD (non-positive pivot)");
        }
    } else {
        F.impl_->lu.analyzePattern(M);
        F.impl_->lu.factorize(M);
        if (F.impl_->lu.info() != Eigen::Success) {
            throw FactorizationError(FactorizationError::Kind::singular,
                                     "factorize: matrix is singular: " + F.impl_->lu.lastErrorMessage());
        }
    }
    return F;
}

void Factorization::solve(std::span<const double> b, std::span<double> x) const {
    if (b.size() != n_ || x.size() != n_) {
        throw std::invalid_argument("Factorization::solve: dimension mismatch");
    }
    if (n_ == 0) return;
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(n_));
    Eigen::Map<Eigen::VectorXd> out(x.data(), static_cast<Eigen::Index>(n_));
    if (spd_) {
        out = impl_->llt.solve(rhs);
    } else {
        out = impl_->lu.solve(rhs);
    }
}

std::vector<double> Factorization::solve(std::span<const double> b) const {
    std::vector<double> x(n_);
    solve(b, x);
    return x;
}

}  // namespace schwarz
