#include "schwarz/decomposition.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace schwarz {

Decomposition partition_structured(const GridSpec& grid, std::size_t subdomains_per_side) {
    grid.validate();
    const std::size_t n = grid.elements_per_side;
    if (subdomains_per_side == 0 || n % subdomains_per_side != 0) {
        throw std::invalid_argument("partition_structured: " + std::to_string(subdomains_per_side) +
                                    " subdomains per side do not divide " + std::to_string(n) + " elements");
    }
    const std::size_t K = subdomains_per_side;
    const std::size_t H = n / K;

    Decomposition dec;
    dec.subdomains_per_side = K;
    dec.num_dofs = grid.free_dof_count();
    dec.owner.resize(dec.num_dofs);
    dec.adjacent_subdomains.resize(dec.num_dofs);

    std::vector<std::vector<std::size_t>> owned(K * K);
    for (std::size_t d = 0; d < dec.num_dofs; ++d) {
        auto [i, j] = grid.node_of_dof(d);
        auto& adj = dec.adjacent_subdomains[d];
        // Interior nodes always have all four surrounding elements.
        for (std::size_t ey = j - 1; ey <= j; ++ey) {
            for (std::size_t ex = i - 1; ex <= i; ++ex) adj.push_back(ex / H + (ey / H) * K);
        }
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        dec.owner[d] = adj.front();
        owned[adj.front()].push_back(d);
    }
    for (auto& dofs : owned) dec.nonoverlapping.emplace_back(std::move(dofs));
    dec.overlapping = dec.nonoverlapping;
    return dec;
}

Decomposition grow_overlap(Decomposition dec, const SparseMatrix& A, std::size_t layers) {
    if (A.rows() != dec.num_dofs || A.cols() != dec.num_dofs) {
        throw std::invalid_argument("grow_overlap: matrix size does not match the decomposition");
    }
    dec.overlap_layers = layers;
    std::vector<std::size_t> mark(dec.num_dofs, npos);
    for (std::size_t s = 0; s < dec.num_subdomains(); ++s) {
        std::vector<std::size_t> members(dec.nonoverlapping[s].begin(), dec.nonoverlapping[s].end());
        for (std::size_t d : members) mark[d] = s;
        std::vector<std::size_t> frontier = members;
        for (std::size_t layer = 0; layer < layers && !frontier.empty(); ++layer) {
            std::vector<std::size_t> next;
            for (std::size_t d : frontier) {
                for (std::size_t nb : A.row_cols(d)) {
                    if (mark[nb] != s) {
                        mark[nb] = s;
                        next.push_back(nb);
                    }
                }
            }
            members.insert(members.end(), next.begin(), next.end());
            frontier = std::move(next);
        }
        dec.overlapping[s] = IndexSet::from_unsorted(std::move(members));
    }
    return dec;
}

SparseMatrix restriction(const Decomposition& dec, std::size_t subdomain) {
    if (subdomain >= dec.num_subdomains()) {
        throw std::invalid_argument("restriction: subdomain " + std::to_string(subdomain) + " out of range (" +
                                    std::to_string(dec.num_subdomains()) + " subdomains)");
    }
    const IndexSet& dofs = dec.overlapping[subdomain];
    std::vector<Triplet> trips;
    trips.reserve(dofs.size());
    for (std::size_t k = 0; k < dofs.size(); ++k) trips.push_back({k, dofs[k], 1.0});
    return SparseMatrix::from_triplets(dofs.size(), dec.num_dofs, trips);
}

const char* to_string(ClassKind kind) {
    switch (kind) {
        case ClassKind::vertex: return "vertex";
        case ClassKind::edge: return "edge";
        case ClassKind::face: return "face";
    }
    return "unknown";
}

const std::vector<std::size_t>& InterfaceClassification::ancestry(std::size_t dof) const {
    static const std::vector<std::size_t> none;
    const std::size_t c = class_of_dof.at(dof);
    return c == npos ? none : class_ancestry[c];
}

namespace {

/// Connected components of `dofs` in the graph of A restricted to `dofs`.
std::vector<IndexSet> connected_components(const std::vector<std::size_t>& dofs, const SparseMatrix& A) {
    std::map<std::size_t, bool> visited;
    for (std::size_t d : dofs) visited[d] = false;
    std::vector<IndexSet> comps;
    for (std::size_t seed : dofs) {
        if (visited[seed]) continue;
        std::vector<std::size_t> comp{seed};
        visited[seed] = true;
        for (std::size_t k = 0; k < comp.size(); ++k) {
            for (std::size_t nb : A.row_cols(comp[k])) {
                auto it = visited.find(nb);
                if (it != visited.end() && !it->second) {
                    it->second = true;
                    comp.push_back(nb);
                }
            }
        }
        comps.push_back(IndexSet::from_unsorted(std::move(comp)));
    }
    return comps;
}

}  // namespace

InterfaceClassification classify_interface(const Decomposition& dec, const SparseMatrix& A) {
    if (A.rows() != dec.num_dofs || A.cols() != dec.num_dofs) {
        throw std::invalid_argument("classify_interface: matrix size does not match the decomposition");
    }
    InterfaceClassification cls;
    cls.num_dofs = dec.num_dofs;

    std::map<std::vector<std::size_t>, std::vector<std::size_t>> groups;
    std::vector<std::size_t> gamma, interior;
    std::vector<std::vector<std::size_t>> sub_interiors(dec.num_subdomains());
    for (std::size_t d = 0; d < dec.num_dofs; ++d) {
        if (dec.multiplicity(d) >= 2) {
            gamma.push_back(d);
            groups[dec.adjacent_subdomains[d]].push_back(d);
        } else {
            interior.push_back(d);
            sub_interiors[dec.owner[d]].push_back(d);
        }
    }
    cls.interface = IndexSet(std::move(gamma));
    cls.interior = IndexSet(std::move(interior));
    for (auto& s : sub_interiors) cls.subdomain_interiors.emplace_back(std::move(s));

    std::vector<InterfaceClass> vertices, edges;
    for (const auto& [subs, dofs] : groups) {
        const ClassKind kind = subs.size() >= 3 ? ClassKind::vertex : ClassKind::edge;
        for (auto& comp : connected_components(dofs, A)) {
            (kind == ClassKind::vertex ? vertices : edges).push_back({kind, std::move(comp), subs});
        }
    }
    auto by_first_dof = [](const InterfaceClass& a, const InterfaceClass& b) { return a.dofs[0] < b.dofs[0]; };
    std::sort(vertices.begin(), vertices.end(), by_first_dof);
    std::sort(edges.begin(), edges.end(), by_first_dof);

    cls.class_of_dof.assign(dec.num_dofs, npos);
    for (auto& v : vertices) {
        cls.vertex_classes.push_back(cls.classes.size());
        cls.classes.push_back(std::move(v));
    }
    for (auto& e : edges) {
        cls.edge_classes.push_back(cls.classes.size());
        cls.classes.push_back(std::move(e));
    }
    for (std::size_t c = 0; c < cls.classes.size(); ++c) {
        for (std::size_t d : cls.classes[c].dofs) cls.class_of_dof[d] = c;
    }

    // Vertex-based coarse components and option-1 ancestry.
    cls.class_ancestry.resize(cls.classes.size());
    cls.edge_vertex_neighbours.resize(cls.classes.size());
    std::vector<std::size_t> component_of_vertex(cls.classes.size(), npos);
    for (std::size_t v : cls.vertex_classes) {
        component_of_vertex[v] = cls.components.size();
        cls.class_ancestry[v] = {cls.components.size()};
        cls.components.push_back({v, false});
    }
    for (std::size_t e : cls.edge_classes) {
        std::vector<std::size_t> nbrs;
        for (std::size_t d : cls.classes[e].dofs) {
            for (std::size_t nb : A.row_cols(d)) {
                const std::size_t c = cls.class_of_dof[nb];
                if (c != npos && cls.classes[c].kind == ClassKind::vertex) nbrs.push_back(c);
            }
        }
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        cls.edge_vertex_neighbours[e] = nbrs;
        if (nbrs.empty()) {
            cls.class_ancestry[e] = {cls.components.size()};
            cls.components.push_back({e, true});
        } else {
            for (std::size_t v : nbrs) cls.class_ancestry[e].push_back(component_of_vertex[v]);
        }
    }
    return cls;
}

void write_decomposition_csv(std::ostream& out, const GridSpec& grid, const Decomposition& dec,
                             const InterfaceClassification& cls) {
    out << "dof,i,j,owner,multiplicity,class_id,class_kind\n";
    for (std::size_t d = 0; d < dec.num_dofs; ++d) {
        auto [i, j] = grid.node_of_dof(d);
        const std::size_t c = cls.class_of_dof[d];
        out << d << ',' << i << ',' << j << ',' << dec.owner[d] << ',' << dec.multiplicity(d) << ',';
        if (c == npos) {
            out << "-1,interior\n";
        } else {
            out << c << ',' << to_string(cls.classes[c].kind) << '\n';
        }
    }
}

void write_decomposition_csv(const std::filesystem::path& path, const GridSpec& grid, const Decomposition& dec,
                             const InterfaceClassification& cls) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_decomposition_csv(out, grid, dec, cls);
}

}  // namespace schwarz
