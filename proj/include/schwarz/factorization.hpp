#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "schwarz/sparse.hpp"

namespace schwarz {

class FactorizationError : public std::runtime_error {
public:
    enum class Kind { not_spd, singular };

    FactorizationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Direct factorization of a square sparse matrix.
///
/// SPD input goes through a fill-reducing (AMD) sparse Cholesky; anything
/// else through a column-pivoted sparse LU. Once built, solve() is const and
/// may be called concurrently.
class Factorization {
public:
    Factorization();
    Factorization(Factorization&&) noexcept;
    Factorization& operator=(Factorization&&) noexcept;
    ~Factorization();

    std::size_t size() const { return n_; }
    bool spd() const { return spd_; }

    std::vector<double> solve(std::span<const double> b) const;
    void solve(std::span<const double> b, std::span<double> x) const;

    friend Factorization factorize(const SparseMatrix& A, bool spd);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t n_ = 0;
    bool spd_ = false;
};

/// Throws FactorizationError (not_spd / singular) or std::invalid_argument.
Factorization factorize(const SparseMatrix& A, bool spd = true);

}  // namespace schwarz
