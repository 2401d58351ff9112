#include "schwarz/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "schwarz/decomposition.hpp"

namespace schwarz {

const char* to_string(SpaceChoice space) {
    switch (space) {
        case SpaceChoice::none: return "none";
        case SpaceChoice::gdsw: return "GDSW";
        case SpaceChoice::rgdsw: return "RGDSW";
        case SpaceChoice::ams: return "AMS";
    }
    return "unknown";
}

SpaceChoice space_from_string(const std::string& name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "NONE" || up == "OAS-1" || up == "OAS1") return SpaceChoice::none;
    if (up == "GDSW") return SpaceChoice::gdsw;
    if (up == "RGDSW") return SpaceChoice::rgdsw;
    if (up == "AMS") return SpaceChoice::ams;
    throw ConfigError("spaces", "unknown coarse space '" + name + "' (expected none, GDSW, RGDSW or AMS)");
}

bool ExperimentConfig::wants_coarse() const {
    return std::any_of(spaces.begin(), spaces.end(), [](SpaceChoice s) { return s != SpaceChoice::none; });
}

void ExperimentConfig::validate() const {
    if (subdomains_per_side < 1) throw ConfigError("subdomains", "must be >= 1");
    if (h_ratio < 2) throw ConfigError("hh", "H/h must be >= 2");
    if (wants_coarse() && h_ratio < 4) throw ConfigError("hh", "H/h must be >= 4 when a coarse space is requested");
    if (!(contrast > 0.0)) throw ConfigError("contrast", "must be positive");
    if (!(tol > 0.0)) throw ConfigError("tol", "must be positive");
    if (max_iter < 1) throw ConfigError("max_iter", "must be >= 1");
    for (std::size_t k = 0; k < spaces.size(); ++k) {
        for (std::size_t l = 0; l < k; ++l) {
            if (spaces[k] == spaces[l]) throw ConfigError("spaces", std::string("duplicate entry ") + to_string(spaces[k]));
        }
    }
    for (std::size_t k : sweep) {
        if (k < 1) throw ConfigError("sweep", "subdomain counts must be >= 1");
    }
    if (inclusion_block && *inclusion_block >= h_ratio) {
        throw ConfigError("inclusion_block", "block must be smaller than H/h = " + std::to_string(h_ratio));
    }
    if (coefficient == CoefficientKind::channels) {
        try {
            ChannelGeometry g = ChannelGeometry::defaults(h_ratio, contrast);
            if (channel_stripes) g.stripes = *channel_stripes;
            if (channel_width) g.width = *channel_width;
            if (channel_margin) g.margin = *channel_margin;
            coefficient_channels(GridSpec{elements_per_side()}, subdomains_per_side, g);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("channels", e.what());
        }
    }
}

namespace {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& dst) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(key, e.what());
    }
}

template <class T>
void read_optional(const nlohmann::json& j, const char* key, std::optional<T>& dst) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        dst.reset();
        return;
    }
    T value{};
    read_field(j, key, value);
    dst = value;
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base) {
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    read_field(j, "subdomains", base.subdomains_per_side);
    read_field(j, "hh", base.h_ratio);
    if (j.contains("elements_per_side")) {
        std::size_t n = 0;
        read_field(j, "elements_per_side", n);
        if (base.subdomains_per_side == 0 || n % base.subdomains_per_side != 0) {
            throw ConfigError("elements_per_side", "must be a multiple of subdomains");
        }
        base.h_ratio = n / base.subdomains_per_side;
    }
    read_field(j, "overlap", base.overlap);
    if (j.contains("coeff")) {
        std::string kind;
        read_field(j, "coeff", kind);
        try {
            base.coefficient = coefficient_kind_from_string(kind);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("coeff", e.what());
        }
    }
    read_field(j, "contrast", base.contrast);
    read_optional(j, "inclusion_block", base.inclusion_block);
    read_optional(j, "channel_stripes", base.channel_stripes);
    read_optional(j, "channel_width", base.channel_width);
    read_optional(j, "channel_margin", base.channel_margin);
    if (j.contains("spaces")) {
        std::vector<std::string> names;
        read_field(j, "spaces", names);
        base.spaces.clear();
        for (const auto& s : names) base.spaces.push_back(space_from_string(s));
    }
    read_field(j, "tol", base.tol);
    read_field(j, "max_iter", base.max_iter);
    read_field(j, "spectrum", base.spectrum);
    read_field(j, "spectrum_cap", base.spectrum_cap);
    read_optional(j, "rhs_seed", base.rhs_seed);
    read_field(j, "sweep", base.sweep);
    read_field(j, "out", base.out);
    read_field(j, "json", base.json_out);
    read_field(j, "dump_coeff", base.dump_coeff);
    read_field(j, "dump_basis", base.dump_basis);
    return base;
}

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["subdomains"] = c.subdomains_per_side;
    j["hh"] = c.h_ratio;
    j["elements_per_side"] = c.elements_per_side();
    j["overlap"] = c.overlap;
    j["coeff"] = to_string(c.coefficient);
    j["contrast"] = c.contrast;
    const std::size_t block = c.inclusion_block.value_or(InclusionGeometry::defaults(c.h_ratio, c.contrast).block);
    const auto channels = ChannelGeometry::defaults(c.h_ratio, c.contrast);
    j["inclusion_block"] = block;
    j["channel_stripes"] = c.channel_stripes.value_or(channels.stripes);
    j["channel_width"] = c.channel_width.value_or(channels.width);
    j["channel_margin"] = c.channel_margin.value_or(channels.margin);
    j["spaces"] = nlohmann::json::array();
    for (auto s : c.spaces) j["spaces"].push_back(to_string(s));
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    j["spectrum"] = c.spectrum;
    j["spectrum_cap"] = c.spectrum_cap;
    j["rhs_seed"] = c.rhs_seed ? nlohmann::json(*c.rhs_seed) : nlohmann::json(nullptr);
    j["initial_guess"] = "zero";
    j["source"] = c.rhs_seed ? "random" : "f=1";
    return j;
}

CoefficientField make_coefficient(const ExperimentConfig& config) {
    const GridSpec grid{config.elements_per_side()};
    switch (config.coefficient) {
        case CoefficientKind::constant: return constant_coefficient(grid, 1.0);
        case CoefficientKind::inclusions: {
            auto g = InclusionGeometry::defaults(config.h_ratio, config.contrast);
            if (config.inclusion_block) g.block = *config.inclusion_block;
            return coefficient_inclusions(grid, config.subdomains_per_side, g);
        }
        case CoefficientKind::channels: {
            auto g = ChannelGeometry::defaults(config.h_ratio, config.contrast);
            if (config.channel_stripes) g.stripes = *config.channel_stripes;
            if (config.channel_width) g.width = *config.channel_width;
            if (config.channel_margin) g.margin = *config.channel_margin;
            return coefficient_channels(grid, config.subdomains_per_side, g);
        }
    }
    throw ConfigError("coeff", "unknown coefficient kind");
}

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::filesystem::path basis_path(const std::string& base, SpaceChoice space, std::size_t coarse_count) {
    if (coarse_count <= 1) return base;
    std::string name = to_string(space);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    return base + "." + name;
}

}  // namespace

RunRecord run_single(const ExperimentConfig& config) {
    config.validate();
    RunRecord record;
    record.config = config;
    record.timestamp = utc_timestamp();
    if (config.spaces.empty()) return record;

    const GridSpec grid{config.elements_per_side()};
    const CoefficientField coeff = make_coefficient(config);
    if (!config.dump_coeff.empty()) write_coefficient_grid(config.dump_coeff, coeff);

    const DiscreteProblem problem = assemble(grid, coeff, 1.0);
    std::vector<double> rhs = problem.b;
    if (config.rhs_seed) {
        std::mt19937_64 gen(*config.rhs_seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (double& v : rhs) v = dist(gen);
    }

    const Decomposition dec =
        grow_overlap(partition_structured(grid, config.subdomains_per_side), problem.A, config.overlap);
    std::optional<InterfaceClassification> cls;
    if (config.wants_coarse()) cls = classify_interface(dec, problem.A);
    const std::size_t coarse_count = static_cast<std::size_t>(
        std::count_if(config.spaces.begin(), config.spaces.end(), [](SpaceChoice s) { return s != SpaceChoice::none; }));

    for (SpaceChoice space : config.spaces) {
        SpaceResult result;
        result.space = space;
        try {
            std::optional<Prolongation> phi;
            if (space != SpaceChoice::none) {
                const auto kind = space == SpaceChoice::gdsw    ? CoarseSpaceKind::gdsw
                                  : space == SpaceChoice::rgdsw ? CoarseSpaceKind::rgdsw
                                                                : CoarseSpaceKind::ams;
                phi = build_coarse_space(kind, problem.A, *cls);
                result.coarse_dim = phi->dimension();
                if (!config.dump_basis.empty()) {
                    write_basis_raster(basis_path(config.dump_basis, space, coarse_count), grid, *phi);
                }
            }
            const auto M = build_preconditioner(problem.A, dec, phi ? &*phi : nullptr);
            result.report = pcg(problem.A, rhs, M, {config.tol, config.max_iter}).report;
            if (config.spectrum) result.spectrum = spectrum(problem.A, M, config.spectrum_cap);
        } catch (const std::exception& e) {
            result.failure = e.what();
        }
        record.results.push_back(std::move(result));
    }
    return record;
}

std::vector<RunRecord> run_scaling(const ExperimentConfig& config, std::span<const std::size_t> counts) {
    std::vector<RunRecord> records;
    for (std::size_t k : counts) {
        ExperimentConfig point = config;
        point.subdomains_per_side = k;
        point.sweep.clear();
        try {
            records.push_back(run_single(point));
        } catch (const std::exception& e) {
            // Configuration-level failure: every requested space fails by name.
            RunRecord rec;
            rec.config = point;
            rec.timestamp = utc_timestamp();
            for (auto s : point.spaces) rec.results.push_back({s, 0, std::nullopt, std::nullopt, e.what()});
            records.push_back(std::move(rec));
        }
    }
    return records;
}

std::vector<CsvRow> tabulate(std::span<const RunRecord> records) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<CsvRow> rows;
    for (const auto& rec : records) {
        for (const auto& res : rec.results) {
            CsvRow row;
            row.space = to_string(res.space);
            row.inv_H = rec.config.subdomains_per_side;
            row.n = rec.config.elements_per_side();
            row.coarse_dim = res.coarse_dim;
            if (res.report) {
                row.iterations = res.report->iterations;
                row.converged = res.report->converged;
                row.kappa_est = res.report->kappa;
                row.lambda_min = res.report->lambda_min;
                row.lambda_max = res.report->lambda_max;
                row.walltime_s = res.report->walltime_s;
            } else {
                row.kappa_est = row.lambda_min = row.lambda_max = row.walltime_s = nan;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

void emit_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << csv_header << '\n' << std::setprecision(17);
    for (const auto& r : tabulate(records)) {
        out << r.space << ',' << r.inv_H << ',' << r.n << ',' << r.coarse_dim << ',' << r.iterations << ','
            << (r.converged ? "true" : "false") << ',' << r.kappa_est << ',' << r.lambda_min << ',' << r.lambda_max
            << ',' << r.walltime_s << '\n';
    }
}

void emit_csv(const std::filesystem::path& path, std::span<const RunRecord> records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    emit_csv(out, records);
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

nlohmann::json to_json(const SolveReport& r) {
    return {{"iterations", r.iterations},
            {"converged", r.converged},
            {"residual_history", r.residual_history},
            {"lambda_min", r.lambda_min},
            {"lambda_max", r.lambda_max},
            {"kappa_est", r.kappa},
            {"walltime_s", r.walltime_s}};
}

nlohmann::json to_json(const SpectrumReport& r) {
    return {{"dimension", r.dimension}, {"nonpositive", r.nonpositive}, {"eigenvalues", r.eigenvalues}};
}

nlohmann::json to_json(const RunRecord& record) {
    nlohmann::json j;
    j["version"] = record.version;
    j["timestamp"] = record.timestamp;
    j["config"] = to_json(record.config);
    j["results"] = nlohmann::json::array();
    for (const auto& res : record.results) {
        nlohmann::json r;
        r["space"] = to_string(res.space);
        r["coarse_dim"] = res.coarse_dim;
        if (res.report) r["report"] = to_json(*res.report);
        if (res.spectrum) r["spectrum"] = to_json(*res.spectrum);
        if (!res.failure.empty()) r["failure"] = res.failure;
        j["results"].push_back(std::move(r));
    }
    return j;
}

}  // namespace schwarz
