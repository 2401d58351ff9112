#include "schwarz/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

namespace schwarz {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

Eigen::MatrixXd Preconditioner::to_dense() const {
    const std::size_t n = size();
    Eigen::MatrixXd out(n, n);
    std::vector<double> e(n, 0.0), z(n);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        apply(e, z);
        for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = z[i];
        e[j] = 0.0;
    }
    return out;
}

void IdentityPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
    std::copy(r.begin(), r.end(), z.begin());
}

SchwarzPreconditioner build_preconditioner(const SparseMatrix& A, const Decomposition& dec, const Prolongation* coarse) {
    if (A.rows() != dec.num_dofs || A.cols() != dec.num_dofs) {
        throw std::invalid_argument("build_preconditioner: matrix size does not match the decomposition");
    }
    std::vector<bool> covered(dec.num_dofs, false);
    for (const auto& dofs : dec.overlapping) {
        for (std::size_t d : dofs) covered[d] = true;
    }
    if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
        throw std::invalid_argument("build_preconditioner: overlapping subdomains do not cover all dofs");
    }

    SchwarzPreconditioner M;
    M.n_ = A.rows();
    for (std::size_t s = 0; s < dec.num_subdomains(); ++s) {
        const IndexSet& dofs = dec.overlapping[s];
        try {
            M.local_.push_back({dofs, factorize(extract_submatrix(A, dofs, dofs), true)});
        } catch (const FactorizationError& err) {
            throw FactorizationError(err.kind(), "local matrix of subdomain " + std::to_string(s) + ": " + err.what());
        }
    }
    if (coarse != nullptr && coarse->dimension() > 0) {
        if (coarse->phi.rows() != A.rows()) {
            throw std::invalid_argument("build_preconditioner: prolongation has the wrong number of rows");
        }
        M.coarse_dim_ = coarse->dimension();
        M.phi_ = coarse->phi;
        M.phi_t_ = transpose(coarse->phi);
        try {
            M.coarse_factor_ = factorize(triple_product(coarse->phi, A), true);
        } catch (const FactorizationError& err) {
            throw FactorizationError(err.kind(), std::string("coarse matrix (") + to_string(coarse->kind) +
                                                     "): " + err.what());
        }
    }
    return M;
}

void SchwarzPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
    if (r.size() != n_ || z.size() != n_) throw std::invalid_argument("SchwarzPreconditioner::apply: size mismatch");
    std::fill(z.begin(), z.end(), 0.0);
    if (coarse_dim_ > 0) {
        const auto rc = spmv(phi_t_, r);
        const auto yc = coarse_factor_.solve(rc);
        const auto zc = spmv(phi_, yc);
        for (std::size_t i = 0; i < n_; ++i) z[i] += zc[i];
    }
    std::vector<double> rl, yl;
    for (const auto& loc : local_) {
        rl.resize(loc.dofs.size());
        yl.resize(loc.dofs.size());
        for (std::size_t k = 0; k < rl.size(); ++k) rl[k] = r[loc.dofs[k]];
        loc.factor.solve(rl, yl);
        for (std::size_t k = 0; k < yl.size(); ++k) z[loc.dofs[k]] += yl[k];
    }
}

Eigen::MatrixXd SchwarzPreconditioner::to_dense() const {
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    if (coarse_dim_ > 0) {
        const auto nc = static_cast<Eigen::Index>(coarse_dim_);
        Eigen::MatrixXd coarse_inv(nc, nc);
        std::vector<double> e(coarse_dim_, 0.0);
        for (std::size_t j = 0; j < coarse_dim_; ++j) {
            e[j] = 1.0;
            const auto col = coarse_factor_.solve(e);
            for (std::size_t i = 0; i < coarse_dim_; ++i) {
                coarse_inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
            }
            e[j] = 0.0;
        }
        Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, nc);
        for (std::size_t i = 0; i < n_; ++i) {
            auto c = phi_.row_cols(i);
            auto v = phi_.row_values(i);
            for (std::size_t k = 0; k < c.size(); ++k) {
                phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c[k])) = v[k];
            }
        }
        out.noalias() += phi * coarse_inv * phi.transpose();
    }
    for (const auto& loc : local_) {
        const std::size_t m = loc.dofs.size();
        std::vector<double> e(m, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            e[j] = 1.0;
            const auto col = loc.factor.solve(e);
            for (std::size_t i = 0; i < m; ++i) {
                out(static_cast<Eigen::Index>(loc.dofs[i]), static_cast<Eigen::Index>(loc.dofs[j])) += col[i];
            }
            e[j] = 0.0;
        }
    }
    return out;
}

std::vector<double> lanczos_ritz_values(std::span<const double> alphas, std::span<const double> betas) {
    const std::size_t k = alphas.size();
    if (k == 0) return {};
    Eigen::VectorXd diag(static_cast<Eigen::Index>(k));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(k > 1 ? k - 1 : 0));
    for (std::size_t j = 0; j < k; ++j) {
        double d = 1.0 / alphas[j];
        if (j > 0) d += betas[j - 1] / alphas[j - 1];
        diag(static_cast<Eigen::Index>(j)) = d;
        if (j + 1 < k) sub(static_cast<Eigen::Index>(j)) = std::sqrt(betas[j]) / alphas[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

PcgResult pcg(const SparseMatrix& A, std::span<const double> b, const Preconditioner& M, const PcgOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = A.rows();
    if (A.cols() != n || b.size() != n || M.size() != n) throw std::invalid_argument("pcg: dimension mismatch");

    PcgResult result;
    auto& rep = result.report;
    result.solution.assign(n, 0.0);
    auto& x = result.solution;
    std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);

    const double bnorm = norm2(b);
    rep.residual_history.push_back(1.0);
    if (bnorm == 0.0) {
        rep.converged = true;
        rep.residual_history.back() = 0.0;
        rep.walltime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return result;
    }

    std::vector<double> alphas, betas;
    M.apply(r, z);
    double rho = dot(r, z);
    if (!(rho > 0.0)) throw SolverBreakdown("pcg: <r, M r> = " + std::to_string(rho) + " at iteration 0");
    p = z;

    for (std::size_t k = 0; k < options.max_iter; ++k) {
        spmv(A, p, q);
        const double curvature = dot(p, q);
        if (!(curvature > 0.0)) {
            throw SolverBreakdown("pcg: <p, A p> = " + std::to_string(curvature) + " at iteration " + std::to_string(k));
        }
        const double alpha = rho / curvature;
        alphas.push_back(alpha);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        rep.iterations = k + 1;
        const double rel = norm2(r) / bnorm;
        rep.residual_history.push_back(rel);
        if (rel < options.tol) {
            rep.converged = true;
            break;
        }
        M.apply(r, z);
        const double rho_next = dot(r, z);
        if (!(rho_next > 0.0)) {
            throw SolverBreakdown("pcg: <r, M r> = " + std::to_string(rho_next) + " at iteration " +
                                  std::to_string(k + 1));
        }
        const double beta = rho_next / rho;
        betas.push_back(beta);
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rho = rho_next;
    }

    const auto ritz = lanczos_ritz_values(alphas, betas);
    if (!ritz.empty()) {
        rep.lambda_min = ritz.front();
        rep.lambda_max = ritz.back();
        rep.kappa = std::max(1.0, rep.lambda_max / rep.lambda_min);
    }
    rep.walltime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

Eigen::MatrixXd to_dense(const SparseMatrix& A) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(A.rows()), static_cast<Eigen::Index>(A.cols()));
    for (std::size_t i = 0; i < A.rows(); ++i) {
        auto c = A.row_cols(i);
        auto v = A.row_values(i);
        for (std::size_t k = 0; k < c.size(); ++k) D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c[k])) = v[k];
    }
    return D;
}

SpectrumReport spectrum(const SparseMatrix& A, const Preconditioner& M, std::size_t max_dofs) {
    const std::size_t n = A.rows();
    if (n > max_dofs) {
        throw std::invalid_argument("spectrum: " + std::to_string(n) + " dofs exceed the dense cap of " +
                                    std::to_string(max_dofs) + "; use fewer subdomains or a smaller H/h");
    }
    if (A.cols() != n || M.size() != n) throw std::invalid_argument("spectrum: dimension mismatch");

    SpectrumReport rep;
    rep.dimension = n;
    if (n == 0) return rep;

    Eigen::MatrixXd Minv = M.to_dense();
    Minv = 0.5 * (Minv + Minv.transpose()).eval();
    const Eigen::MatrixXd Ad = to_dense(A);
    // M⁻¹A x = λ x with A = L Lᵀ  <=>  Lᵀ M⁻¹ L y = λ y.
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Minv, Ad, Eigen::ABx_lx | Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) throw std::runtime_error("spectrum: dense eigensolver failed");
    const Eigen::VectorXd& ev = ges.eigenvalues();
    rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
    rep.nonpositive = static_cast<std::size_t>(
        std::count_if(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](double l) { return l <= 0.0; }));
    return rep;
}

void write_residual_csv(std::ostream& out, const SolveReport& report) {
    out << "iteration,relative_residual\n" << std::setprecision(17);
    for (std::size_t k = 0; k < report.residual_history.size(); ++k) {
        out << k << ',' << report.residual_history[k] << '\n';
    }
}

}  // namespace schwarz
