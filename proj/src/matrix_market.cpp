#include "schwarz/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace schwarz {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

struct Header {
    std::string format;    // coordinate | array
    std::string field;     // real | integer | pattern
    std::string symmetry;  // general | symmetric
};

Header read_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("MatrixMarket: empty stream");
    std::istringstream hs(line);
    std::string banner, object;
    Header h;
    hs >> banner >> object >> h.format >> h.field >> h.symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        throw std::runtime_error("MatrixMarket: bad banner line '" + line + "'");
    }
    h.format = lower(h.format);
    h.field = lower(h.field);
    h.symmetry = lower(h.symmetry);
    if (h.field == "complex") throw std::runtime_error("MatrixMarket: complex matrices not supported");
    if (h.symmetry != "general" && h.symmetry != "symmetric") {
        throw std::runtime_error("MatrixMarket: unsupported symmetry '" + h.symmetry + "'");
    }
    return h;
}

std::string next_data_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') return line;
    }
    throw std::runtime_error("MatrixMarket: unexpected end of file");
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

void write_matrix_market(std::ostream& out, const SparseMatrix& A) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.rows() << ' ' << A.cols() << ' ' << A.nnz() << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        auto c = A.row_cols(i);
        auto v = A.row_values(i);
        for (std::size_t k = 0; k < c.size(); ++k) out << i + 1 << ' ' << c[k] + 1 << ' ' << v[k] << '\n';
    }
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& A) {
    auto out = open_out(path);
    write_matrix_market(out, A);
}

SparseMatrix read_matrix_market(std::istream& in) {
    const Header h = read_header(in);
    if (h.format != "coordinate") throw std::runtime_error("MatrixMarket: expected coordinate format");
    std::istringstream sizes(next_data_line(in));
    std::size_t nrows = 0, ncols = 0, nnz = 0;
    if (!(sizes >> nrows >> ncols >> nnz)) throw std::runtime_error("MatrixMarket: bad size line");

    std::vector<Triplet> trips;
    trips.reserve(h.symmetry == "symmetric" ? 2 * nnz : nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
        std::istringstream ls(next_data_line(in));
        std::size_t i = 0, j = 0;
        double v = 1.0;
        if (!(ls >> i >> j)) throw std::runtime_error("MatrixMarket: bad entry line");
        if (h.field != "pattern" && !(ls >> v)) throw std::runtime_error("MatrixMarket: missing value");
        if (i == 0 || j == 0) throw std::runtime_error("MatrixMarket: indices are 1-based");
        trips.push_back({i - 1, j - 1, v});
        if (h.symmetry == "symmetric" && i != j) trips.push_back({j - 1, i - 1, v});
    }
    return SparseMatrix::from_triplets(nrows, ncols, trips);
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return read_matrix_market(in);
}

void write_matrix_market_vector(std::ostream& out, std::span<const double> v) {
    out << "%%MatrixMarket matrix array real general\n";
    out << v.size() << " 1\n";
    out << std::setprecision(17);
    for (double x : v) out << x << '\n';
}

void write_matrix_market_vector(const std::filesystem::path& path, std::span<const double> v) {
    auto out = open_out(path);
    write_matrix_market_vector(out, v);
}

std::vector<double> read_matrix_market_vector(std::istream& in) {
    const Header h = read_header(in);
    if (h.format != "array") throw std::runtime_error("MatrixMarket: expected array format for a vector");
    std::istringstream sizes(next_data_line(in));
    std::size_t nrows = 0, ncols = 0;
    if (!(sizes >> nrows >> ncols) || ncols != 1) throw std::runtime_error("MatrixMarket: expected n x 1 array");
    std::vector<double> v(nrows);
    for (auto& x : v) {
        std::istringstream ls(next_data_line(in));
        if (!(ls >> x)) throw std::runtime_error("MatrixMarket: bad array entry");
    }
    return v;
}

}  // namespace schwarz
