#include "schwarz/coarse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include "schwarz/factorization.hpp"

namespace schwarz {

const char* to_string(CoarseSpaceKind kind) {
    switch (kind) {
        case CoarseSpaceKind::gdsw: return "GDSW";
        case CoarseSpaceKind::rgdsw: return "RGDSW";
        case CoarseSpaceKind::ams: return "AMS";
    }
    return "unknown";
}

CoarseSpaceKind coarse_space_from_string(const std::string& name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "GDSW") return CoarseSpaceKind::gdsw;
    if (up == "RGDSW") return CoarseSpaceKind::rgdsw;
    if (up == "AMS") return CoarseSpaceKind::ams;
    throw std::invalid_argument("unknown coarse space '" + name + "'");
}

InterfaceValues gdsw_interface_values(const InterfaceClassification& cls) {
    InterfaceValues out;
    std::vector<Triplet> trips;
    trips.reserve(cls.interface.size());
    for (std::size_t p = 0; p < cls.interface.size(); ++p) {
        trips.push_back({p, cls.class_of_dof[cls.interface[p]], 1.0});
    }
    for (std::size_t c = 0; c < cls.classes.size(); ++c) out.columns.push_back({c, cls.classes[c].kind});
    out.values = SparseMatrix::from_triplets(cls.interface.size(), cls.classes.size(), trips);
    return out;
}

InterfaceValues rgdsw_interface_values(const InterfaceClassification& cls) {
    InterfaceValues out;
    std::vector<Triplet> trips;
    for (std::size_t p = 0; p < cls.interface.size(); ++p) {
        const auto& anc = cls.ancestry(cls.interface[p]);
        const double weight = 1.0 / static_cast<double>(anc.size());
        for (std::size_t comp : anc) trips.push_back({p, comp, weight});
    }
    for (const auto& comp : cls.components) out.columns.push_back({comp.class_id, cls.classes[comp.class_id].kind});
    out.values = SparseMatrix::from_triplets(cls.interface.size(), cls.components.size(), trips);
    return out;
}

InterfaceValues ams_interface_values(const SparseMatrix& A, const InterfaceClassification& cls) {
    InterfaceValues out;
    std::vector<std::size_t> column_of_vertex(cls.classes.size(), npos);
    for (std::size_t v : cls.vertex_classes) {
        column_of_vertex[v] = out.columns.size();
        out.columns.push_back({v, ClassKind::vertex});
    }

    std::vector<Triplet> trips;
    for (std::size_t v : cls.vertex_classes) {
        for (std::size_t d : cls.classes[v].dofs) trips.push_back({cls.interface.position(d), column_of_vertex[v], 1.0});
    }

    for (std::size_t e : cls.edge_classes) {
        const auto& vertices = cls.edge_vertex_neighbours[e];
        if (vertices.empty()) continue;
        const IndexSet& dofs = cls.classes[e].dofs;

        // Reduced edge matrix: couplings inside the edge are kept, couplings
        // to interiors and to other edges move onto the diagonal.
        std::vector<Triplet> reduced;
        std::vector<std::vector<double>> rhs(vertices.size(), std::vector<double>(dofs.size(), 0.0));
        for (std::size_t r = 0; r < dofs.size(); ++r) {
            auto rc = A.row_cols(dofs[r]);
            auto rv = A.row_values(dofs[r]);
            double lumped = 0.0;
            for (std::size_t k = 0; k < rc.size(); ++k) {
                const std::size_t c = cls.class_of_dof[rc[k]];
                if (c == e) {
                    reduced.push_back({r, dofs.position(rc[k]), rv[k]});
                } else if (c == npos || cls.classes[c].kind != ClassKind::vertex) {
                    lumped += rv[k];
                } else {
                    auto it = std::find(vertices.begin(), vertices.end(), c);
                    rhs[static_cast<std::size_t>(it - vertices.begin())][r] -= rv[k];
                }
            }
            reduced.push_back({r, r, lumped});
        }

        Factorization F;
        try {
            F = factorize(SparseMatrix::from_triplets(dofs.size(), dofs.size(), reduced), true);
        } catch (const FactorizationError& err) {
            throw FactorizationError(err.kind(), "AMS: reduced matrix of edge class " + std::to_string(e) +
                                                     " is singular: " + err.what());
        }
        for (std::size_t k = 0; k < vertices.size(); ++k) {
            const auto x = F.solve(rhs[k]);
            for (std::size_t r = 0; r < dofs.size(); ++r) {
                trips.push_back({cls.interface.position(dofs[r]), column_of_vertex[vertices[k]], x[r]});
            }
        }
    }
    out.values = SparseMatrix::from_triplets(cls.interface.size(), out.columns.size(), trips);
    return out;
}

Prolongation harmonic_extension(const SparseMatrix& A, const InterfaceClassification& cls,
                                const InterfaceValues& gamma_values, CoarseSpaceKind kind) {
    const IndexSet& gamma = cls.interface;
    const SparseMatrix& phi_gamma = gamma_values.values;
    if (phi_gamma.rows() != gamma.size()) {
        throw std::invalid_argument("harmonic_extension: interface values have " + std::to_string(phi_gamma.rows()) +
                                    " rows, interface has " + std::to_string(gamma.size()) + " dofs");
    }
    const std::size_t ncoarse = phi_gamma.cols();

    std::vector<Triplet> trips;
    for (std::size_t p = 0; p < gamma.size(); ++p) {
        auto c = phi_gamma.row_cols(p);
        auto v = phi_gamma.row_values(p);
        for (std::size_t k = 0; k < c.size(); ++k) trips.push_back({gamma[p], c[k], v[k]});
    }

    for (std::size_t s = 0; s < cls.subdomain_interiors.size(); ++s) {
        const IndexSet& inner = cls.subdomain_interiors[s];
        if (inner.empty() || ncoarse == 0) continue;
        // Columns of A_IΓ Φ_Γ restricted to this interior.
        const SparseMatrix coupling = transpose(multiply(extract_submatrix(A, inner, gamma), phi_gamma));
        Factorization F;
        try {
            F = factorize(extract_submatrix(A, inner, inner), true);
        } catch (const FactorizationError& err) {
            throw FactorizationError(err.kind(), "harmonic extension: interior block of subdomain " +
                                                     std::to_string(s) + ": " + err.what());
        }
        std::vector<double> rhs(inner.size());
        for (std::size_t col = 0; col < ncoarse; ++col) {
            auto rc = coupling.row_cols(col);
            if (rc.empty()) continue;
            auto rv = coupling.row_values(col);
            std::fill(rhs.begin(), rhs.end(), 0.0);
            for (std::size_t k = 0; k < rc.size(); ++k) rhs[rc[k]] = -rv[k];
            const auto x = F.solve(rhs);
            for (std::size_t k = 0; k < inner.size(); ++k) trips.push_back({inner[k], col, x[k]});
        }
    }

    Prolongation out;
    out.kind = kind;
    out.columns = gamma_values.columns;
    out.phi = SparseMatrix::from_triplets(cls.num_dofs, ncoarse, trips);
    return out;
}

Prolongation build_coarse_space(CoarseSpaceKind kind, const SparseMatrix& A, const InterfaceClassification& cls) {
    switch (kind) {
        case CoarseSpaceKind::gdsw: return harmonic_extension(A, cls, gdsw_interface_values(cls), kind);
        case CoarseSpaceKind::rgdsw: return harmonic_extension(A, cls, rgdsw_interface_values(cls), kind);
        case CoarseSpaceKind::ams: return harmonic_extension(A, cls, ams_interface_values(A, cls), kind);
    }
    throw std::invalid_argument("build_coarse_space: unknown kind");
}

namespace {

/// Solves F X = -B column by column; returns nonzeros of X as triplets with
/// rows mapped through `rows` and columns kept.
void solve_columns(const Factorization& F, const SparseMatrix& B, const IndexSet& rows, std::vector<Triplet>& out) {
    const SparseMatrix Bt = transpose(B);
    std::vector<double> rhs(B.rows());
    for (std::size_t col = 0; col < Bt.rows(); ++col) {
        auto rc = Bt.row_cols(col);
        if (rc.empty()) continue;
        auto rv = Bt.row_values(col);
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (std::size_t k = 0; k < rc.size(); ++k) rhs[rc[k]] = -rv[k];
        const auto x = F.solve(rhs);
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (x[k] != 0.0) out.push_back({rows[k], col, x[k]});
        }
    }
}

SparseMatrix local_rows(const std::vector<Triplet>& global, const IndexSet& rows, std::size_t ncols) {
    std::vector<Triplet> local;
    local.reserve(global.size());
    for (const auto& t : global) local.push_back({rows.position(t.row), t.col, t.value});
    return SparseMatrix::from_triplets(rows.size(), ncols, local);
}

}  // namespace

Prolongation ams_backward_substitution(const SparseMatrix& A, const InterfaceClassification& cls) {
    std::vector<std::size_t> v_dofs, e_dofs, e_orphan;
    std::vector<std::size_t> column_of_class(cls.classes.size(), npos);
    Prolongation out;
    out.kind = CoarseSpaceKind::ams;
    for (std::size_t v : cls.vertex_classes) {
        column_of_class[v] = out.columns.size();
        out.columns.push_back({v, ClassKind::vertex});
        v_dofs.insert(v_dofs.end(), cls.classes[v].dofs.begin(), cls.classes[v].dofs.end());
    }
    for (std::size_t e : cls.edge_classes) {
        auto& dst = cls.edge_vertex_neighbours[e].empty() ? e_orphan : e_dofs;
        dst.insert(dst.end(), cls.classes[e].dofs.begin(), cls.classes[e].dofs.end());
    }
    const IndexSet V = IndexSet::from_unsorted(std::move(v_dofs));
    const IndexSet E = IndexSet::from_unsorted(std::move(e_dofs));
    const IndexSet& I = cls.interior;
    const std::size_t nv = out.columns.size();

    std::vector<Triplet> phi_v;
    for (std::size_t k = 0; k < V.size(); ++k) phi_v.push_back({V[k], column_of_class[cls.class_of_dof[V[k]]], 1.0});
    const SparseMatrix Phi_V = local_rows(phi_v, V, nv);

    // Ã_EE = A_EE without couplings between different edges, plus the row
    // sums of everything dropped (interior couplings, other edges).
    const SparseMatrix A_EE = extract_submatrix(A, E, E);
    const auto dropped = row_sums(extract_submatrix(A, E, set_union(I, IndexSet::from_unsorted(e_orphan))));
    std::vector<Triplet> tilde;
    for (std::size_t r = 0; r < E.size(); ++r) {
        auto rc = A_EE.row_cols(r);
        auto rv = A_EE.row_values(r);
        double diag = dropped[r];
        for (std::size_t k = 0; k < rc.size(); ++k) {
            if (cls.class_of_dof[E[r]] == cls.class_of_dof[E[rc[k]]]) {
                tilde.push_back({r, rc[k], rv[k]});
            } else {
                diag += rv[k];
            }
        }
        tilde.push_back({r, r, diag});
    }

    std::vector<Triplet> phi_e;
    if (!E.empty() && nv > 0) {
        const Factorization F = factorize(SparseMatrix::from_triplets(E.size(), E.size(), tilde), true);
        solve_columns(F, multiply(extract_submatrix(A, E, V), Phi_V), E, phi_e);
    }
    const SparseMatrix Phi_E = local_rows(phi_e, E, nv);

    std::vector<Triplet> phi_i;
    if (!I.empty() && nv > 0) {
        const SparseMatrix coupling = add(multiply(extract_submatrix(A, I, V), Phi_V),
                                          multiply(extract_submatrix(A, I, E), Phi_E));
        const Factorization F = factorize(extract_submatrix(A, I, I), true);
        solve_columns(F, coupling, I, phi_i);
    }

    std::vector<Triplet> all;
    all.reserve(phi_v.size() + phi_e.size() + phi_i.size());
    all.insert(all.end(), phi_i.begin(), phi_i.end());
    all.insert(all.end(), phi_e.begin(), phi_e.end());
    all.insert(all.end(), phi_v.begin(), phi_v.end());
    out.phi = SparseMatrix::from_triplets(cls.num_dofs, nv, all);
    return out;
}

void write_basis_raster(std::ostream& out, const GridSpec& grid, const Prolongation& prolongation) {
    const std::size_t n = grid.elements_per_side;
    const SparseMatrix cols = transpose(prolongation.phi);
    out << std::setprecision(17);
    std::vector<double> raster((n + 1) * (n + 1));
    for (std::size_t c = 0; c < cols.rows(); ++c) {
        std::fill(raster.begin(), raster.end(), 0.0);
        auto rc = cols.row_cols(c);
        auto rv = cols.row_values(c);
        for (std::size_t k = 0; k < rc.size(); ++k) {
            auto [i, j] = grid.node_of_dof(rc[k]);
            raster[i + j * (n + 1)] = rv[k];
        }
        const auto& desc = prolongation.columns[c];
        out << "# column " << c << ' ' << to_string(desc.kind) << ' ' << desc.class_id << '\n';
        for (std::size_t j = 0; j <= n; ++j) {
            for (std::size_t i = 0; i <= n; ++i) out << (i ? " " : "") << raster[i + j * (n + 1)];
            out << '\n';
        }
    }
}

void write_basis_raster(const std::filesystem::path& path, const GridSpec& grid, const Prolongation& prolongation) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_basis_raster(out, grid, prolongation);
}

}  // namespace schwarz
