#include "schwarz/problem.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace schwarz {

void GridSpec::validate() const {
    if (elements_per_side < 2) {
        throw std::invalid_argument("GridSpec: elements_per_side must be >= 2, got " +
                                    std::to_string(elements_per_side));
    }
}

const char* to_string(CoefficientKind kind) {
    switch (kind) {
        case CoefficientKind::constant: return "constant";
        case CoefficientKind::inclusions: return "inclusions";
        case CoefficientKind::channels: return "channels";
    }
    return "unknown";
}

CoefficientKind coefficient_kind_from_string(const std::string& name) {
    if (name == "constant") return CoefficientKind::constant;
    if (name == "inclusions") return CoefficientKind::inclusions;
    if (name == "channels") return CoefficientKind::channels;
    throw std::invalid_argument("unknown coefficient kind '" + name + "'");
}

InclusionGeometry InclusionGeometry::defaults(std::size_t h_ratio, double contrast) {
    return {3 * h_ratio / 4, contrast};
}

ChannelGeometry ChannelGeometry::defaults(std::size_t h_ratio, double contrast) {
    return {2, std::max<std::size_t>(1, h_ratio / 8), 1, contrast};
}

std::size_t CoefficientField::count_high() const {
    if (high == background) return 0;
    return static_cast<std::size_t>(std::count(values.begin(), values.end(), high));
}

CoefficientField constant_coefficient(const GridSpec& grid, double value) {
    grid.validate();
    CoefficientField c;
    c.kind = CoefficientKind::constant;
    c.elements_per_side = grid.elements_per_side;
    c.background = value;
    c.high = value;
    c.values.assign(grid.element_count(), value);
    return c;
}

namespace {

std::size_t subdomain_size(const GridSpec& grid, std::size_t subdomains_per_side) {
    grid.validate();
    if (subdomains_per_side == 0 || grid.elements_per_side % subdomains_per_side != 0) {
        throw std::invalid_argument("subdomains_per_side " + std::to_string(subdomains_per_side) +
                                    " does not divide elements_per_side " +
                                    std::to_string(grid.elements_per_side));
    }
    return grid.elements_per_side / subdomains_per_side;
}

}  // namespace

CoefficientField coefficient_inclusions(const GridSpec& grid, std::size_t subdomains_per_side,
                                        const InclusionGeometry& geometry) {
    const std::size_t h_ratio = subdomain_size(grid, subdomains_per_side);
    if (geometry.block >= h_ratio) {
        throw std::invalid_argument("inclusion block of " + std::to_string(geometry.block) +
                                    " elements does not fit inside a subdomain of " + std::to_string(h_ratio));
    }
    const std::size_t n = grid.elements_per_side;
    CoefficientField c;
    c.kind = CoefficientKind::inclusions;
    c.elements_per_side = n;
    c.background = 1.0;
    c.high = geometry.contrast;
    c.values.assign(grid.element_count(), 1.0);
    if (geometry.block == 0) return c;

    // Block spans elements [node - block/2, node - block/2 + block) per axis.
    for (std::size_t cy = 1; cy < subdomains_per_side; ++cy) {
        for (std::size_t cx = 1; cx < subdomains_per_side; ++cx) {
            const std::size_t x0 = cx * h_ratio - geometry.block / 2;
            const std::size_t y0 = cy * h_ratio - geometry.block / 2;
            for (std::size_t ey = y0; ey < y0 + geometry.block; ++ey) {
                for (std::size_t ex = x0; ex < x0 + geometry.block; ++ex) c.values[ex + ey * n] = geometry.contrast;
            }
        }
    }
    return c;
}

std::vector<std::size_t> channel_offsets(std::size_t h_ratio, const ChannelGeometry& geometry) {
    std::vector<std::size_t> offsets;
    for (std::size_t j = 0; j < geometry.stripes; ++j) {
        offsets.push_back((2 * j + 1) * h_ratio / (2 * geometry.stripes));
    }
    return offsets;
}

CoefficientField coefficient_channels(const GridSpec& grid, std::size_t subdomains_per_side,
                                      const ChannelGeometry& geometry) {
    const std::size_t h_ratio = subdomain_size(grid, subdomains_per_side);
    const std::size_t n = grid.elements_per_side;
    CoefficientField c;
    c.kind = CoefficientKind::channels;
    c.elements_per_side = n;
    c.background = 1.0;
    c.high = geometry.contrast;
    c.values.assign(grid.element_count(), 1.0);
    if (geometry.stripes == 0) return c;
    if (geometry.width == 0) throw std::invalid_argument("channel width must be positive");

    if (2 * geometry.margin >= n) throw std::invalid_argument("channel margin leaves no stripe");
    if (subdomains_per_side > 1 && geometry.margin >= h_ratio) {
        throw std::invalid_argument("channel margin must be smaller than a subdomain so stripes cross every edge");
    }
    const auto offsets = channel_offsets(h_ratio, geometry);
    for (std::size_t j = 0; j < offsets.size(); ++j) {
        // A stripe on element rows [s, s+w) touches node rows s..s+w; both
        // ends must stay strictly between the coarse node rows 0 and H/h.
        if (offsets[j] < 1 || offsets[j] + geometry.width > h_ratio - 1) {
            throw std::invalid_argument("channel stripe at element row " + std::to_string(offsets[j]) +
                                        " with width " + std::to_string(geometry.width) +
                                        " touches a coarse node row (H/h = " + std::to_string(h_ratio) + ")");
        }
        if (j > 0 && offsets[j] < offsets[j - 1] + geometry.width) {
            throw std::invalid_argument("channel stripes overlap; reduce the stripe count or width");
        }
    }
    for (std::size_t row = 0; row < subdomains_per_side; ++row) {
        for (std::size_t off : offsets) {
            for (std::size_t ey = row * h_ratio + off; ey < row * h_ratio + off + geometry.width; ++ey) {
                for (std::size_t ex = geometry.margin; ex < n - geometry.margin; ++ex) c.values[ex + ey * n] = geometry.contrast;
            }
        }
    }
    return c;
}

std::pair<double, double> DiscreteProblem::coordinates(std::size_t dof) const {
    auto [i, j] = grid.node_of_dof(dof);
    return {static_cast<double>(i) * grid.h(), static_cast<double>(j) * grid.h()};
}

bool DiscreteProblem::touches_boundary(std::size_t dof) const {
    auto [i, j] = grid.node_of_dof(dof);
    const std::size_t n = grid.elements_per_side;
    return i == 1 || j == 1 || i == n - 1 || j == n - 1;
}

namespace {

IndexSet interior_nodes(const GridSpec& grid) {
    const std::size_t n = grid.elements_per_side;
    std::vector<std::size_t> nodes;
    nodes.reserve(grid.free_dof_count());
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 1; i < n; ++i) nodes.push_back(i + j * (n + 1));
    }
    return IndexSet(std::move(nodes));
}

void check_coefficient(const GridSpec& grid, const CoefficientField& coeff) {
    grid.validate();
    if (coeff.elements_per_side != grid.elements_per_side || coeff.values.size() != grid.element_count()) {
        throw std::invalid_argument("coefficient field does not match the grid");
    }
}

}  // namespace

DiscreteProblem assemble(const GridSpec& grid, const CoefficientField& coeff, double f) {
    check_coefficient(grid, coeff);
    const std::size_t n = grid.elements_per_side;
    const double h = grid.h();

    // Local nodes counter-clockwise from the lower-left corner. Bilinear
    // element Laplacian on a square (independent of h in 2D).
    constexpr std::array<std::array<std::size_t, 2>, 4> corner{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    constexpr double diag = 2.0 / 3.0;
    constexpr double adjacent = -1.0 / 6.0;
    constexpr double opposite = -1.0 / 3.0;
    const double load = f * h * h / 4.0;

    std::vector<Triplet> trips;
    trips.reserve(16 * grid.element_count());
    std::vector<double> b(grid.free_dof_count(), 0.0);
    for (std::size_t ey = 0; ey < n; ++ey) {
        for (std::size_t ex = 0; ex < n; ++ex) {
            const double alpha = coeff(ex, ey);
            std::array<std::size_t, 4> dof{};
            for (std::size_t a = 0; a < 4; ++a) dof[a] = grid.free_dof(ex + corner[a][0], ey + corner[a][1]);
            for (std::size_t a = 0; a < 4; ++a) {
                if (dof[a] == npos) continue;
                b[dof[a]] += load;
                for (std::size_t c = 0; c < 4; ++c) {
                    if (dof[c] == npos) continue;
                    const std::size_t differing =
                        (corner[a][0] != corner[c][0] ? 1 : 0) + (corner[a][1] != corner[c][1] ? 1 : 0);
                    const double k = differing == 0 ? diag : (differing == 1 ? adjacent : opposite);
                    trips.push_back({dof[a], dof[c], alpha * k});
                }
            }
        }
    }
    const std::size_t m = grid.free_dof_count();
    return {grid, SparseMatrix::from_triplets(m, m, trips), std::move(b), interior_nodes(grid)};
}

DiscreteProblem assemble_five_point(const GridSpec& grid, const CoefficientField& coeff, double f) {
    check_coefficient(grid, coeff);
    const std::size_t n = grid.elements_per_side;
    const double h = grid.h();

    std::vector<Triplet> trips;
    auto add_edge = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1, double weight) {
        const std::size_t p = grid.free_dof(i0, j0);
        const std::size_t q = grid.free_dof(i1, j1);
        if (p != npos) trips.push_back({p, p, weight});
        if (q != npos) trips.push_back({q, q, weight});
        if (p != npos && q != npos) {
            trips.push_back({p, q, -weight});
            trips.push_back({q, p, -weight});
        }
    };
    // Horizontal grid edges (i,j)-(i+1,j) border elements (i, j-1) and (i, j).
    for (std::size_t j = 0; j <= n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            int count = 0;
            if (j > 0) { sum += coeff(i, j - 1); ++count; }
            if (j < n) { sum += coeff(i, j); ++count; }
            add_edge(i, j, i + 1, j, sum / count);
        }
    }
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0;
            int count = 0;
            if (i > 0) { sum += coeff(i - 1, j); ++count; }
            if (i < n) { sum += coeff(i, j); ++count; }
            add_edge(i, j, i, j + 1, sum / count);
        }
    }
    const std::size_t m = grid.free_dof_count();
    return {grid, SparseMatrix::from_triplets(m, m, trips), std::vector<double>(m, f * h * h),
            interior_nodes(grid)};
}

void write_coefficient_grid(std::ostream& out, const CoefficientField& coeff) {
    const std::size_t n = coeff.elements_per_side;
    out << std::setprecision(17);
    for (std::size_t ey = 0; ey < n; ++ey) {
        for (std::size_t ex = 0; ex < n; ++ex) out << (ex ? " " : "") << coeff(ex, ey);
        out << '\n';
    }
}

void write_coefficient_grid(const std::filesystem::path& path, const CoefficientField& coeff) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_coefficient_grid(out, coeff);
}

}  // namespace schwarz
