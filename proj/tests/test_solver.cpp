#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "schwarz/solver.hpp"

using namespace schwarz;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Setup {
    DiscreteProblem problem;
    Decomposition dec;
    InterfaceClassification cls;
};

Setup make(std::size_t n, std::size_t K, unsigned seed = 0, std::size_t overlap = 2) {
    const GridSpec g{n};
    auto c = constant_coefficient(g);
    if (seed != 0) {
        std::mt19937 gen(seed);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (double& v : c.values) v = std::pow(10.0, u(gen));
    }
    auto p = assemble(g, c);
    auto dec = grow_overlap(partition_structured(g, K), p.A, overlap);
    auto cls = classify_interface(dec, p.A);
    return {std::move(p), std::move(dec), std::move(cls)};
}

oracle::Dense from_eigen(const Eigen::MatrixXd& M) {
    oracle::Dense D = oracle::zeros(static_cast<std::size_t>(M.rows()), static_cast<std::size_t>(M.cols()));
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) D[i][j] = M(i, j);
    }
    return D;
}

std::vector<double> random_vector(std::size_t n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(gen);
    return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

TEST_CASE("one subdomain makes the preconditioner the exact inverse", "[solver]") {
    const auto s = make(6, 1);
    const auto M = build_preconditioner(s.problem.A, s.dec);
    CHECK(M.levels() == 1);
    const auto inv = oracle::inverse(oracle::dense(s.problem.A));
    CHECK(oracle::max_abs_diff(from_eigen(M.to_dense()), inv) <= 1e-12 * oracle::max_abs(inv));
    const auto r = pcg(s.problem.A, s.problem.b, M);
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 1);
}

TEST_CASE("a coarse space without columns leaves a one-level method", "[solver]") {
    const auto s = make(8, 2);
    Prolongation empty;
    empty.phi = SparseMatrix::zero(49, 0);
    const auto M = build_preconditioner(s.problem.A, s.dec, &empty);
    CHECK(M.levels() == 1);
    CHECK(M.coarse_dimension() == 0);
    const auto M1 = build_preconditioner(s.problem.A, s.dec);
    CHECK(oracle::max_abs_diff(from_eigen(M.to_dense()), from_eigen(M1.to_dense())) == 0.0);
}

TEST_CASE("two-level operator matches its dense definition", "[solver]") {
    const auto s = make(8, 2, 11);
    const auto D = oracle::dense(s.problem.A);
    for (auto kind : {CoarseSpaceKind::gdsw, CoarseSpaceKind::rgdsw, CoarseSpaceKind::ams}) {
        const auto phi = build_coarse_space(kind, s.problem.A, s.cls);
        const auto M = build_preconditioner(s.problem.A, s.dec, &phi);
        CHECK(M.levels() == 2);
        CHECK(M.num_subdomains() == 4);

        const auto P = oracle::dense(phi.phi);
        const auto A0 = oracle::matmul(oracle::transposed(P), oracle::matmul(D, P));
        auto ref = oracle::matmul(P, oracle::matmul(oracle::inverse(A0), oracle::transposed(P)));
        for (const auto& dofs : s.dec.overlapping) {
            const std::vector<std::size_t> idx(dofs.begin(), dofs.end());
            const auto local_inv = oracle::inverse(oracle::slice(D, idx, idx));
            for (std::size_t a = 0; a < idx.size(); ++a) {
                for (std::size_t b = 0; b < idx.size(); ++b) ref[idx[a]][idx[b]] += local_inv[a][b];
            }
        }
        const double scale = oracle::max_abs(ref);
        INFO(to_string(kind));
        CHECK(oracle::max_abs_diff(from_eigen(M.to_dense()), ref) <= 1e-12 * scale);
        CHECK(oracle::max_abs_diff(from_eigen(M.Preconditioner::to_dense()), ref) <= 1e-12 * scale);
    }
}

TEST_CASE("preconditioner application is linear, symmetric and maps zero to zero", "[solver]") {
    const auto s = make(16, 4, 5);
    const auto phi = build_coarse_space(CoarseSpaceKind::ams, s.problem.A, s.cls);
    const auto M = build_preconditioner(s.problem.A, s.dec, &phi);
    const std::size_t n = s.problem.size();
    const auto z0 = M.apply(std::vector<double>(n, 0.0));
    CHECK(norm(z0) == 0.0);

    const auto u = random_vector(n, 1), v = random_vector(n, 2);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = u[i] + v[i];
    const auto Mu = M.apply(u), Mv = M.apply(v), Mw = M.apply(w);
    double lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) lin = std::max(lin, std::abs(Mw[i] - Mu[i] - Mv[i]));
    CHECK(lin <= 1e-12 * norm(Mw));
    CHECK(std::abs(dot(Mu, v) - dot(u, Mv)) <= 1e-10 * norm(u) * norm(v));
    std::vector<double> bad(n - 1);
    REQUIRE_THROWS_AS(M.apply(bad), std::invalid_argument);
}

TEST_CASE("identity system converges in one step with unit condition", "[solver]") {
    const auto A = SparseMatrix::identity(5);
    const IdentityPreconditioner I(5);
    const auto r = pcg(A, std::vector<double>{1, 2, 3, 4, 5}, I);
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 1);
    CHECK(r.report.kappa == 1.0);
    CHECK(r.solution == std::vector<double>{1, 2, 3, 4, 5});
    CHECK(r.report.residual_history.size() == 2);
    CHECK(r.report.residual_history.front() == 1.0);
}

TEST_CASE("Lanczos recovers the spectrum of diag(1, 4)", "[solver]") {
    const auto A = oracle::sparse({{1.0, 0.0}, {0.0, 4.0}});
    const auto r = pcg(A, std::vector<double>{1.0, 1.0}, IdentityPreconditioner(2));
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 2);
    CHECK_THAT(r.report.lambda_min, WithinRel(1.0, 1e-12));
    CHECK_THAT(r.report.lambda_max, WithinRel(4.0, 1e-12));
    CHECK_THAT(r.report.kappa, WithinRel(4.0, 1e-12));
    CHECK_THAT(r.solution[0], WithinAbs(1.0, 1e-14));
    CHECK_THAT(r.solution[1], WithinAbs(0.25, 1e-14));
}

TEST_CASE("Ritz values of a one-step Lanczos matrix", "[solver]") {
    CHECK(lanczos_ritz_values(std::vector<double>{0.5}, {}) == std::vector<double>{2.0});
    CHECK(lanczos_ritz_values({}, {}).empty());
}

TEST_CASE("zero right-hand side returns immediately", "[solver]") {
    const auto s = make(8, 2);
    const auto M = build_preconditioner(s.problem.A, s.dec);
    const auto r = pcg(s.problem.A, std::vector<double>(49, 0.0), M);
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 0);
    CHECK(r.solution == std::vector<double>(49, 0.0));
}

TEST_CASE("iteration cap is reported, not thrown", "[solver]") {
    const auto s = make(16, 4);
    const auto M = build_preconditioner(s.problem.A, s.dec);
    const auto r = pcg(s.problem.A, s.problem.b, M, {1e-12, 3});
    CHECK_FALSE(r.report.converged);
    CHECK(r.report.iterations == 3);
    CHECK(r.report.residual_history.size() == 4);
}

TEST_CASE("indefinite systems raise a breakdown", "[solver]") {
    const auto A = oracle::sparse({{1.0, 0.0}, {0.0, -1.0}});
    REQUIRE_THROWS_AS(pcg(A, std::vector<double>{1.0, 1.0}, IdentityPreconditioner(2)), SolverBreakdown);
    REQUIRE_THROWS_AS(pcg(A, std::vector<double>{1.0}, IdentityPreconditioner(2)), std::invalid_argument);
}

TEST_CASE("two-level PCG agrees with a direct solve", "[solver]") {
    const auto s = make(16, 2, 9);
    const auto phi = build_coarse_space(CoarseSpaceKind::gdsw, s.problem.A, s.cls);
    const auto M = build_preconditioner(s.problem.A, s.dec, &phi);
    const auto r = pcg(s.problem.A, s.problem.b, M);
    REQUIRE(r.report.converged);
    const auto direct = factorize(s.problem.A).solve(s.problem.b);
    const auto dense = oracle::solve(oracle::dense(s.problem.A), s.problem.b);
    std::vector<double> e1(direct.size()), e2(direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
        e1[i] = r.solution[i] - direct[i];
        e2[i] = direct[i] - dense[i];
    }
    CHECK(norm(e1) <= 1e-7 * norm(direct));
    CHECK(norm(e2) <= 1e-10 * norm(direct));
    // Relative residual history is monotone in the sense of ending below tol.
    CHECK(r.report.residual_history.back() < 1e-8);
}

TEST_CASE("spectrum of the exact inverse is all ones", "[solver]") {
    const auto s = make(6, 1);
    const auto M = build_preconditioner(s.problem.A, s.dec);
    const auto sp = spectrum(s.problem.A, M);
    REQUIRE(sp.dimension == 25);
    CHECK(sp.nonpositive == 0);
    for (double l : sp.eigenvalues) CHECK_THAT(l, WithinAbs(1.0, 1e-12));
}

TEST_CASE("spectrum with the identity preconditioner is the spectrum of A", "[solver]") {
    const auto s = make(6, 2, 4);
    const auto sp = spectrum(s.problem.A, IdentityPreconditioner(25));
    const auto ref = oracle::jacobi_eigenvalues(oracle::dense(s.problem.A));
    REQUIRE(sp.eigenvalues.size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK_THAT(sp.eigenvalues[k], WithinRel(ref[k], 1e-10));
}

TEST_CASE("spectrum refuses problems above the dense cap", "[solver]") {
    const auto s = make(8, 2);
    const auto M = build_preconditioner(s.problem.A, s.dec);
    REQUIRE_THROWS_WITH(spectrum(s.problem.A, M, 48), Catch::Matchers::ContainsSubstring("fewer subdomains"));
    CHECK_NOTHROW(spectrum(s.problem.A, M, 49));
}

TEST_CASE("two-level spectrum agrees with the Lanczos estimate", "[solver]") {
    const auto s = make(16, 4, 8);
    const auto phi = build_coarse_space(CoarseSpaceKind::gdsw, s.problem.A, s.cls);
    const auto M = build_preconditioner(s.problem.A, s.dec, &phi);
    const auto sp = spectrum(s.problem.A, M);
    const auto r = pcg(s.problem.A, random_vector(225, 3), M, {1e-12, 1000});
    CHECK(sp.nonpositive == 0);
    // Ritz values lie inside the spectrum.
    CHECK(r.report.lambda_min >= sp.eigenvalues.front() * (1.0 - 1e-8));
    CHECK(r.report.lambda_max <= sp.eigenvalues.back() * (1.0 + 1e-8));
    // Additive Schwarz with a coarse level: λ_max is at most one more than the
    // number of colours in any colouring where same-coloured subdomains share
    // no matrix coupling (each colour then contributes a single projection).
    const std::size_t N = s.dec.overlapping.size();
    std::vector<std::vector<bool>> touch(N);
    for (std::size_t i = 0; i < N; ++i) {
        touch[i].assign(225, false);
        for (std::size_t d : s.dec.overlapping[i]) {
            for (std::size_t c : s.problem.A.row_cols(d)) touch[i][c] = true;
        }
    }
    std::vector<std::size_t> colour(N, 0);
    std::size_t colours = 0;
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<bool> used(N, false);
        for (std::size_t j = 0; j < i; ++j) {
            const bool coupled = std::any_of(s.dec.overlapping[j].begin(), s.dec.overlapping[j].end(),
                                             [&](std::size_t d) { return touch[i][d]; });
            if (coupled) used[colour[j]] = true;
        }
        while (used[colour[i]]) ++colour[i];
        colours = std::max(colours, colour[i] + 1);
    }
    const double bound = 1.0 + static_cast<double>(colours);
    CHECK(colours == 9);
    CHECK(sp.eigenvalues.back() <= bound + 1e-8);
}

TEST_CASE("preconditioner construction validates its inputs", "[solver]") {
    const auto s = make(8, 2);
    const auto other = make(6, 2);
    REQUIRE_THROWS_AS(build_preconditioner(other.problem.A, s.dec), std::invalid_argument);
    auto holes = s.dec;
    holes.overlapping[0] = IndexSet({0});
    holes.overlapping[1] = IndexSet({1});
    holes.overlapping[2] = IndexSet({2});
    holes.overlapping[3] = IndexSet({3});
    REQUIRE_THROWS_AS(build_preconditioner(s.problem.A, holes), std::invalid_argument);
    Prolongation wrong;
    wrong.phi = SparseMatrix::zero(10, 2);
    REQUIRE_THROWS_AS(build_preconditioner(s.problem.A, s.dec, &wrong), std::invalid_argument);
}

TEST_CASE("residual CSV has one line per history entry", "[solver]") {
    SolveReport rep;
    rep.residual_history = {1.0, 0.5, 0.25};
    std::ostringstream out;
    write_residual_csv(out, rep);
    CHECK(out.str() == "iteration,relative_residual\n0,1\n1,0.5\n2,0.25\n");
}
