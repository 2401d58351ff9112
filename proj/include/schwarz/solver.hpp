#pragma once

/// @file solver.hpp
/// @brief One- and two-level additive Schwarz preconditioners, preconditioned
/// CG with a Lanczos condition estimate, and a dense spectrum probe.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "schwarz/coarse.hpp"
#include "schwarz/decomposition.hpp"
#include "schwarz/factorization.hpp"
#include "schwarz/sparse.hpp"

namespace schwarz {

/// Symmetric positive preconditioner z = M⁻¹ r.
class Preconditioner {
public:
    virtual ~Preconditioner() = default;
    virtual std::size_t size() const = 0;
    virtual void apply(std::span<const double> r, std::span<double> z) const = 0;

    std::vector<double> apply(std::span<const double> r) const {
        std::vector<double> z(r.size());
        apply(r, z);
        return z;
    }

    /// Dense M⁻¹; the default applies the operator to unit vectors.
    virtual Eigen::MatrixXd to_dense() const;
};

class IdentityPreconditioner final : public Preconditioner {
public:
    explicit IdentityPreconditioner(std::size_t n) : n_(n) {}
    using Preconditioner::apply;
    std::size_t size() const override { return n_; }
    void apply(std::span<const double> r, std::span<double> z) const override;

private:
    std::size_t n_;
};

/// M⁻¹ = Φ A_0⁻¹ Φᵀ + Σ_i R_iᵀ A_i⁻¹ R_i with A_i = R_i A R_iᵀ and
/// A_0 = Φᵀ A Φ. Restrictions are plain 0/1 maps.
class SchwarzPreconditioner final : public Preconditioner {
public:
    using Preconditioner::apply;
    std::size_t size() const override { return n_; }
    void apply(std::span<const double> r, std::span<double> z) const override;
    Eigen::MatrixXd to_dense() const override;

    std::size_t levels() const { return coarse_dim_ > 0 ? 2 : 1; }
    std::size_t coarse_dimension() const { return coarse_dim_; }
    std::size_t num_subdomains() const { return local_.size(); }

    friend SchwarzPreconditioner build_preconditioner(const SparseMatrix& A, const Decomposition& dec,
                                                      const Prolongation* coarse);

private:
    struct LocalSolver {
        IndexSet dofs;
        Factorization factor;
    };

    std::size_t n_ = 0;
    std::vector<LocalSolver> local_;
    std::size_t coarse_dim_ = 0;
    SparseMatrix phi_;
    SparseMatrix phi_t_;
    Factorization coarse_factor_;
};

/// Throws FactorizationError naming the failing block. A coarse space with
/// zero columns yields a one-level preconditioner.
SchwarzPreconditioner build_preconditioner(const SparseMatrix& A, const Decomposition& dec,
                                           const Prolongation* coarse = nullptr);

struct PcgOptions {
    double tol = 1e-8;
    std::size_t max_iter = 10000;
};

struct SolveReport {
    std::size_t iterations = 0;
    std::vector<double> residual_history;  ///< ‖r_k‖₂/‖r_0‖₂, k = 0..iterations
    bool converged = false;
    double lambda_min = 1.0;  ///< extreme Ritz values of the PCG Lanczos matrix
    double lambda_max = 1.0;
    double kappa = 1.0;
    double walltime_s = 0.0;
};

struct PcgResult {
    std::vector<double> solution;
    SolveReport report;
};

/// Non-positive curvature or ⟨r, M⁻¹r⟩ <= 0.
class SolverBreakdown : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Preconditioned CG from a zero initial guess, stopping when the
/// unpreconditioned residual satisfies ‖r_k‖₂ < tol ‖b‖₂. Hitting max_iter is
/// reported (converged = false), not thrown.
PcgResult pcg(const SparseMatrix& A, std::span<const double> b, const Preconditioner& M,
              const PcgOptions& options = {});

/// Eigenvalues of the symmetric tridiagonal Lanczos matrix assembled from CG
/// step lengths alpha_k and ratios beta_k = rho_{k+1}/rho_k.
std::vector<double> lanczos_ritz_values(std::span<const double> alphas, std::span<const double> betas);

struct SpectrumReport {
    std::vector<double> eigenvalues;  ///< ascending
    std::size_t dimension = 0;
    std::size_t nonpositive = 0;  ///< audit count of eigenvalues <= 0
};

inline constexpr std::size_t default_spectrum_cap = 5000;

/// All eigenvalues of M⁻¹A via the symmetric pencil form. Refuses problems
/// larger than `max_dofs`.
SpectrumReport spectrum(const SparseMatrix& A, const Preconditioner& M, std::size_t max_dofs = default_spectrum_cap);

Eigen::MatrixXd to_dense(const SparseMatrix& A);

void write_residual_csv(std::ostream& out, const SolveReport& report);

}  // namespace schwarz
