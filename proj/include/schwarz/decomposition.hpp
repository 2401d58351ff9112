#pragma once

/// @file decomposition.hpp
/// @brief Structured nonoverlapping partitions, algebraic overlap growth,
/// restriction operators and the vertex/edge classification of the interface.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "schwarz/problem.hpp"
#include "schwarz/sparse.hpp"

namespace schwarz {

struct Decomposition {
    std::size_t subdomains_per_side = 1;
    std::size_t num_dofs = 0;
    std::size_t overlap_layers = 0;

    std::vector<std::size_t> owner;                            ///< per free dof
    std::vector<std::vector<std::size_t>> adjacent_subdomains;  ///< sorted, per free dof
    std::vector<IndexSet> nonoverlapping;                       ///< partition of the free dofs
    std::vector<IndexSet> overlapping;                          ///< Ω_i′

    std::size_t num_subdomains() const { return nonoverlapping.size(); }
    std::size_t multiplicity(std::size_t dof) const { return adjacent_subdomains[dof].size(); }
};

/// Square element blocks; subdomain (sx, sy) has id sx + sy K. A node is owned
/// by the lowest-index subdomain whose closure contains it. The overlapping
/// sets start equal to the nonoverlapping ones.
Decomposition partition_structured(const GridSpec& grid, std::size_t subdomains_per_side);

/// Ω_i′ = dofs within graph distance `layers` of the nonoverlapping set in the
/// (symmetric) adjacency graph of A.
Decomposition grow_overlap(Decomposition dec, const SparseMatrix& A, std::size_t layers);

/// 0/1 selector of Ω_i′, size |Ω_i′| x n.
SparseMatrix restriction(const Decomposition& dec, std::size_t subdomain);

enum class ClassKind { vertex, edge, face };

const char* to_string(ClassKind kind);

struct InterfaceClass {
    ClassKind kind = ClassKind::edge;
    IndexSet dofs;
    std::vector<std::size_t> subdomains;  ///< shared adjacent-subdomain set
};

/// A vertex-based coarse component: either a vertex class or an edge class
/// with no vertex neighbour (standalone).
struct CoarseComponent {
    std::size_t class_id = 0;
    bool standalone = false;
};

struct InterfaceClassification {
    std::size_t num_dofs = 0;
    IndexSet interface;  ///< Γ
    IndexSet interior;   ///< I
    std::vector<IndexSet> subdomain_interiors;

    /// Vertex classes first, then edge classes; each group ordered by its
    /// smallest dof. Faces are never produced in 2D.
    std::vector<InterfaceClass> classes;
    std::vector<std::size_t> vertex_classes;
    std::vector<std::size_t> edge_classes;
    std::vector<std::size_t> face_classes;
    std::vector<std::size_t> class_of_dof;  ///< npos for interior dofs

    std::vector<CoarseComponent> components;
    /// For each class, the components it is assigned to. A vertex class maps
    /// to its own component only.
    std::vector<std::vector<std::size_t>> class_ancestry;

    /// Components assigned to a Γ dof (empty for interior dofs).
    const std::vector<std::size_t>& ancestry(std::size_t dof) const;

    /// Vertex classes adjacent (in the graph of A) to an edge class.
    std::vector<std::vector<std::size_t>> edge_vertex_neighbours;
};

/// Γ = dofs of multiplicity >= 2, grouped by identical adjacent-subdomain sets
/// and split into connected components of the graph of A.
InterfaceClassification classify_interface(const Decomposition& dec, const SparseMatrix& A);

/// CSV: dof,i,j,owner,multiplicity,class_id,class_kind (class_id -1 and kind
/// "interior" off the interface).
void write_decomposition_csv(std::ostream& out, const GridSpec& grid, const Decomposition& dec,
                             const InterfaceClassification& cls);
void write_decomposition_csv(const std::filesystem::path& path, const GridSpec& grid,
                             const Decomposition& dec, const InterfaceClassification& cls);

}  // namespace schwarz
