#pragma once

// Dense reference implementations for the tests. Deliberately written
// without touching the library's sparse kernels or factorizations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <random>
#include <stdexcept>
#include <vector>

#include "schwarz/sparse.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense zeros(std::size_t r, std::size_t c) { return Dense(r, std::vector<double>(c, 0.0)); }

inline Dense dense(const schwarz::SparseMatrix& A) {
    Dense D = zeros(A.rows(), A.cols());
    const auto off = A.row_offsets();
    const auto col = A.col_indices();
    const auto val = A.values();
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t k = off[i]; k < off[i + 1]; ++k) D[i][col[k]] += val[k];
    }
    return D;
}

inline schwarz::SparseMatrix sparse(const Dense& D) {
    std::vector<schwarz::Triplet> t;
    for (std::size_t i = 0; i < D.size(); ++i) {
        for (std::size_t j = 0; j < D[i].size(); ++j) {
            if (D[i][j] != 0.0) t.push_back({i, j, D[i][j]});
        }
    }
    return schwarz::SparseMatrix::from_triplets(D.size(), D.empty() ? 0 : D[0].size(), t);
}

inline Dense matmul(const Dense& A, const Dense& B) {
    const std::size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
    Dense C = zeros(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            if (A[i][l] == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
        }
    }
    return C;
}

inline Dense transposed(const Dense& A) {
    Dense T = zeros(A.empty() ? 0 : A[0].size(), A.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < A[i].size(); ++j) T[j][i] = A[i][j];
    }
    return T;
}

inline std::vector<double> matvec(const Dense& A, const std::vector<double>& x) {
    std::vector<double> y(A.size(), 0.0);
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
    }
    return y;
}

inline Dense slice(const Dense& A, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    Dense S = zeros(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = 0; b < cols.size(); ++b) S[a][b] = A[rows[a]][cols[b]];
    }
    return S;
}

/// Gaussian elimination with partial pivoting; solves A X = B column-wise.
inline Dense solve(Dense A, Dense B) {
    const std::size_t n = A.size();
    const std::size_t m = B.empty() ? 0 : B[0].size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(A[i][k]) > std::abs(A[p][k])) p = i;
        }
        if (A[p][k] == 0.0) throw std::runtime_error("oracle::solve: singular");
        std::swap(A[k], A[p]);
        std::swap(B[k], B[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A[i][k] / A[k][k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            for (std::size_t j = 0; j < m; ++j) B[i][j] -= f * B[k][j];
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            double s = B[kk][j];
            for (std::size_t l = kk + 1; l < n; ++l) s -= A[kk][l] * B[l][j];
            B[kk][j] = s / A[kk][kk];
        }
    }
    return B;
}

inline std::vector<double> solve(const Dense& A, const std::vector<double>& b) {
    Dense B = zeros(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) B[i][0] = b[i];
    const Dense X = solve(A, B);
    std::vector<double> x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) x[i] = X[i][0];
    return x;
}

inline Dense inverse(const Dense& A) {
    Dense I = zeros(A.size(), A.size());
    for (std::size_t i = 0; i < A.size(); ++i) I[i][i] = 1.0;
    return solve(A, I);
}

inline double max_abs_diff(const Dense& A, const Dense& B) {
    double d = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < A[i].size(); ++j) d = std::max(d, std::abs(A[i][j] - B[i][j]));
    }
    return d;
}

inline double max_abs(const Dense& A) {
    double d = 0.0;
    for (const auto& row : A) {
        for (double v : row) d = std::max(d, std::abs(v));
    }
    return d;
}

/// Random symmetric diagonally dominant (hence SPD) matrix.
inline Dense random_spd(std::size_t n, unsigned seed, double density = 0.4) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), coin(0.0, 1.0);
    Dense A = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (coin(gen) < density) A[i][j] = A[j][i] = u(gen);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::abs(A[i][j]);
        A[i][i] = s + 1.0 + coin(gen);
    }
    return A;
}

inline Dense random_dense(std::size_t r, std::size_t c, unsigned seed, double density = 0.5) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), coin(0.0, 1.0);
    Dense A = zeros(r, c);
    for (auto& row : A) {
        for (double& v : row) v = coin(gen) < density ? u(gen) : 0.0;
    }
    return A;
}

/// Q1 stiffness for -div(alpha grad u) on an n x n grid of the unit square,
/// assembled node-by-node from the bilinear basis gradients integrated with a
/// 2x2 Gauss rule, boundary rows and columns dropped. alpha(ex, ey).
template <class Alpha>
Dense q1_stiffness(std::size_t n, Alpha alpha) {
    const std::size_t m = n - 1;
    Dense A = zeros(m * m, m * m);
    const double g = 1.0 / std::sqrt(3.0);
    const double gp[2] = {0.5 - 0.5 * g, 0.5 + 0.5 * g};
    auto dof = [&](std::size_t i, std::size_t j) -> long {
        if (i == 0 || j == 0 || i == n || j == n) return -1;
        return static_cast<long>((i - 1) + (j - 1) * m);
    };
    for (std::size_t ey = 0; ey < n; ++ey) {
        for (std::size_t ex = 0; ex < n; ++ex) {
            const double a = alpha(ex, ey);
            // Reference square [0,1]^2; gradients scale as 1/h and the Jacobian
            // as h^2, so the element integral is h-independent.
            for (int la = 0; la < 4; ++la) {
                for (int lb = 0; lb < 4; ++lb) {
                    const int ax = la & 1, ay = la >> 1, bx = lb & 1, by = lb >> 1;
                    double s = 0.0;
                    for (double x : gp) {
                        for (double y : gp) {
                            const double fa_x = (ax ? 1.0 : -1.0) * (ay ? y : 1.0 - y);
                            const double fa_y = (ay ? 1.0 : -1.0) * (ax ? x : 1.0 - x);
                            const double fb_x = (bx ? 1.0 : -1.0) * (by ? y : 1.0 - y);
                            const double fb_y = (by ? 1.0 : -1.0) * (bx ? x : 1.0 - x);
                            s += 0.25 * (fa_x * fb_x + fa_y * fb_y);
                        }
                    }
                    const long p = dof(ex + ax, ey + ay), q = dof(ex + bx, ey + by);
                    if (p >= 0 && q >= 0) A[p][q] += a * s;
                }
            }
        }
    }
    return A;
}

/// Breadth-first distance-limited neighbourhood of `seeds` in the graph of A.
inline std::vector<std::size_t> bfs_layers(const Dense& A, const std::vector<std::size_t>& seeds, std::size_t layers) {
    const std::size_t n = A.size();
    std::vector<std::size_t> dist(n, static_cast<std::size_t>(-1));
    std::queue<std::size_t> q;
    for (std::size_t s : seeds) {
        dist[s] = 0;
        q.push(s);
    }
    while (!q.empty()) {
        const std::size_t v = q.front();
        q.pop();
        if (dist[v] == layers) continue;
        for (std::size_t w = 0; w < n; ++w) {
            if (w != v && A[v][w] != 0.0 && dist[w] == static_cast<std::size_t>(-1)) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] != static_cast<std::size_t>(-1)) out.push_back(v);
    }
    return out;
}

/// Symmetric eigenvalues by cyclic Jacobi rotations (small matrices only).
inline std::vector<double> jacobi_eigenvalues(Dense A) {
    const std::size_t n = A.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) off += A[i][j] * A[i][j];
        }
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(A[p][q]) < 1e-300) continue;
                const double theta = (A[q][q] - A[p][p]) / (2.0 * A[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A[k][p], akq = A[k][q];
                    A[k][p] = c * akp - s * akq;
                    A[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A[p][k], aqk = A[q][k];
                    A[p][k] = c * apk - s * aqk;
                    A[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = A[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace oracle
