#pragma once

/// @file problem.hpp
/// @brief Structured unit-square grids, piecewise-constant coefficient layouts
/// and the assembled diffusion system -div(alpha grad u) = f with zero
/// Dirichlet data.
///
/// Node (i, j) sits at (i h, j h), 0 <= i, j <= n. Element (ex, ey) covers
/// [ex h, (ex+1) h] x [ey h, (ey+1) h]. Boundary nodes are eliminated, so the
/// free dofs are the (n-1)^2 interior nodes numbered row-major:
/// dof = (i-1) + (j-1)(n-1).

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "schwarz/sparse.hpp"

namespace schwarz {

struct GridSpec {
    std::size_t elements_per_side = 2;

    /// Throws std::invalid_argument unless n >= 2.
    void validate() const;

    double h() const { return 1.0 / static_cast<double>(elements_per_side); }
    std::size_t node_count() const { return (elements_per_side + 1) * (elements_per_side + 1); }
    std::size_t element_count() const { return elements_per_side * elements_per_side; }
    std::size_t free_dof_count() const { return (elements_per_side - 1) * (elements_per_side - 1); }

    bool is_boundary_node(std::size_t i, std::size_t j) const {
        return i == 0 || j == 0 || i == elements_per_side || j == elements_per_side;
    }
    /// npos for boundary nodes.
    std::size_t free_dof(std::size_t i, std::size_t j) const {
        if (is_boundary_node(i, j)) return npos;
        return (i - 1) + (j - 1) * (elements_per_side - 1);
    }
    std::pair<std::size_t, std::size_t> node_of_dof(std::size_t dof) const {
        const std::size_t m = elements_per_side - 1;
        return {dof % m + 1, dof / m + 1};
    }
};

enum class CoefficientKind { constant, inclusions, channels };

const char* to_string(CoefficientKind kind);
CoefficientKind coefficient_kind_from_string(const std::string& name);

/// Square high-coefficient blocks centred on the interior coarse nodes.
struct InclusionGeometry {
    std::size_t block = 0;  ///< block side in elements
    double contrast = 1e8;

    /// 3(H/h)/4 elements per side, so each block reaches past a two-layer
    /// overlap into all four subdomains around its coarse node.
    static InclusionGeometry defaults(std::size_t h_ratio, double contrast);
};

/// Horizontal high-coefficient stripes, `stripes` of them per subdomain row.
/// Stripe j starts at element row (2j+1)(H/h)/(2 stripes) within the row and
/// spans element columns [margin, n - margin).
struct ChannelGeometry {
    std::size_t stripes = 0;
    std::size_t width = 1;  ///< in elements
    std::size_t margin = 1;  ///< low-coefficient elements between a stripe end and the boundary
    double contrast = 1e8;

    /// 2 stripes of width max(1, (H/h)/8), one element short of each side.
    static ChannelGeometry defaults(std::size_t h_ratio, double contrast);
};

/// One value per element, row-major (element (ex, ey) at ex + ey n).
struct CoefficientField {
    CoefficientKind kind = CoefficientKind::constant;
    std::size_t elements_per_side = 0;
    double background = 1.0;
    double high = 1.0;
    std::vector<double> values;

    double operator()(std::size_t ex, std::size_t ey) const { return values[ex + ey * elements_per_side]; }
    double contrast() const { return high / background; }
    std::size_t count_high() const;
};

CoefficientField constant_coefficient(const GridSpec& grid, double value = 1.0);

/// Throws std::invalid_argument if the block does not fit strictly inside a
/// subdomain or the grid does not split into subdomains_per_side squares.
CoefficientField coefficient_inclusions(const GridSpec& grid, std::size_t subdomains_per_side,
                                        const InclusionGeometry& geometry);

/// Throws std::invalid_argument if a stripe would touch a coarse node row or
/// stripes overlap.
CoefficientField coefficient_channels(const GridSpec& grid, std::size_t subdomains_per_side,
                                      const ChannelGeometry& geometry);

/// Element rows (local to a subdomain row) where each stripe starts.
std::vector<std::size_t> channel_offsets(std::size_t h_ratio, const ChannelGeometry& geometry);

struct DiscreteProblem {
    GridSpec grid;
    SparseMatrix A;
    std::vector<double> b;
    IndexSet free_nodes;  ///< global node ids (i + j (n+1)) of the free dofs

    std::size_t size() const { return b.size(); }
    std::pair<double, double> coordinates(std::size_t dof) const;
    /// True if some graph neighbour of dof (in the full stencil) is a boundary node.
    bool touches_boundary(std::size_t dof) const;
};

/// Q1 stiffness with exact element integrals and load f h^2/4 per element node.
DiscreteProblem assemble(const GridSpec& grid, const CoefficientField& coeff, double f = 1.0);

/// Five-point finite-difference operator on the same nodes; each grid edge is
/// weighted by the mean coefficient of the elements sharing it. Load f h^2.
DiscreteProblem assemble_five_point(const GridSpec& grid, const CoefficientField& coeff, double f = 1.0);

/// One line per element row (bottom row first), n values per line.
void write_coefficient_grid(std::ostream& out, const CoefficientField& coeff);
void write_coefficient_grid(const std::filesystem::path& path, const CoefficientField& coeff);

}  // namespace schwarz
