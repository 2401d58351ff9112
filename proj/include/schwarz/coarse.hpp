#pragma once

/// @file coarse.hpp
/// @brief Algebraic coarse spaces for two-level Schwarz: GDSW, RGDSW (option 1)
/// and AMS.
///
/// All three are energy-minimizing extensions Φ = [-A_II⁻¹ A_IΓ; I] Φ_Γ of
/// interface values Φ_Γ and differ only in how Φ_Γ is chosen:
///
///  - GDSW: indicator of each vertex/edge class (the constant null space
///    restricted to the class).
///  - RGDSW: one function per vertex-based component, valued 1/|ancestry| on
///    every interface dof assigned to it.
///  - AMS: vertex indicators, with edge values from reduced edge problems
///    whose dropped couplings are lumped onto the diagonal so constants stay
///    energy-minimal.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "schwarz/decomposition.hpp"
#include "schwarz/problem.hpp"
#include "schwarz/sparse.hpp"

namespace schwarz {

enum class CoarseSpaceKind { gdsw, rgdsw, ams };

const char* to_string(CoarseSpaceKind kind);
CoarseSpaceKind coarse_space_from_string(const std::string& name);

/// What a coarse column represents.
struct CoarseDof {
    std::size_t class_id = 0;
    ClassKind kind = ClassKind::vertex;
};

/// Φ_Γ with rows indexed by position in the classification's Γ set.
struct InterfaceValues {
    SparseMatrix values;
    std::vector<CoarseDof> columns;
};

struct Prolongation {
    CoarseSpaceKind kind = CoarseSpaceKind::gdsw;
    SparseMatrix phi;  ///< fine dofs x coarse dofs
    std::vector<CoarseDof> columns;

    std::size_t dimension() const { return phi.cols(); }
};

InterfaceValues gdsw_interface_values(const InterfaceClassification& cls);

InterfaceValues rgdsw_interface_values(const InterfaceClassification& cls);

/// Throws FactorizationError naming the edge class if a reduced edge matrix
/// is singular. Edge classes without a vertex neighbour get zero rows.
InterfaceValues ams_interface_values(const SparseMatrix& A, const InterfaceClassification& cls);

/// Φ_I = -A_II⁻¹ A_IΓ Φ_Γ, one subdomain interior at a time.
Prolongation harmonic_extension(const SparseMatrix& A, const InterfaceClassification& cls,
                                const InterfaceValues& gamma_values, CoarseSpaceKind kind);

Prolongation build_coarse_space(CoarseSpaceKind kind, const SparseMatrix& A, const InterfaceClassification& cls);

/// AMS prolongation by block backward substitution of the reduced system
/// ordered (I, E, V): Φ_V = I, Φ_E = -Ã_EE⁻¹ A_EV Φ_V,
/// Φ_I = -A_II⁻¹ (A_IV Φ_V + A_IE Φ_E), using global blocks throughout.
/// Kept as an independent route to the same Φ as build_coarse_space(ams).
Prolongation ams_backward_substitution(const SparseMatrix& A, const InterfaceClassification& cls);

/// Per-column node rasters: a "# column c <kind> <class>" line followed by
/// n+1 lines of n+1 values (boundary nodes are zero, bottom row first).
void write_basis_raster(std::ostream& out, const GridSpec& grid, const Prolongation& prolongation);
void write_basis_raster(const std::filesystem::path& path, const GridSpec& grid, const Prolongation& prolongation);

}  // namespace schwarz
