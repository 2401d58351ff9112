#pragma once

/// @file harness.hpp
/// @brief Experiment configuration, single runs and weak-scaling sweeps, and
/// their CSV/JSON records.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "schwarz/coarse.hpp"
#include "schwarz/problem.hpp"
#include "schwarz/solver.hpp"

namespace schwarz {

inline constexpr const char* software_version = "0.1.0";

/// "none" is the one-level preconditioner.
enum class SpaceChoice { none, gdsw, rgdsw, ams };

const char* to_string(SpaceChoice space);
SpaceChoice space_from_string(const std::string& name);

/// Invalid configuration; field() names the offending setting.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct ExperimentConfig {
    std::size_t subdomains_per_side = 4;
    std::size_t h_ratio = 8;  ///< H/h, elements per subdomain side
    std::size_t overlap = 2;  ///< algebraic layers (δ = overlap·h)
    CoefficientKind coefficient = CoefficientKind::constant;
    double contrast = 1e8;
    std::optional<std::size_t> inclusion_block;
    std::optional<std::size_t> channel_stripes;
    std::optional<std::size_t> channel_width;
    std::optional<std::size_t> channel_margin;
    std::vector<SpaceChoice> spaces{SpaceChoice::none, SpaceChoice::gdsw, SpaceChoice::rgdsw, SpaceChoice::ams};
    double tol = 1e-8;
    std::size_t max_iter = 10000;
    bool spectrum = false;
    std::size_t spectrum_cap = default_spectrum_cap;
    std::optional<std::uint64_t> rhs_seed;  ///< random RHS instead of f = 1
    std::vector<std::size_t> sweep;

    std::string out;
    std::string json_out;
    std::string dump_coeff;
    std::string dump_basis;

    std::size_t elements_per_side() const { return subdomains_per_side * h_ratio; }
    bool wants_coarse() const;

    /// Throws ConfigError.
    void validate() const;
};

/// Fields present in `j` override `base`. Throws ConfigError on bad values.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
nlohmann::json to_json(const ExperimentConfig& config);

/// Coefficient layout requested by the config on its grid.
CoefficientField make_coefficient(const ExperimentConfig& config);

struct SpaceResult {
    SpaceChoice space = SpaceChoice::none;
    std::size_t coarse_dim = 0;
    std::optional<SolveReport> report;
    std::optional<SpectrumReport> spectrum;
    std::string failure;  ///< empty on success
};

struct RunRecord {
    ExperimentConfig config;
    std::vector<SpaceResult> results;
    std::string version = software_version;
    std::string timestamp;
};

RunRecord run_single(const ExperimentConfig& config);

/// Fixed H/h, one run per subdomains-per-side count, in input order.
std::vector<RunRecord> run_scaling(const ExperimentConfig& config, std::span<const std::size_t> counts);

inline constexpr const char* csv_header =
    "space,inv_H,n,coarse_dim,iterations,converged,kappa_est,lambda_min,lambda_max,walltime_s";

struct CsvRow {
    std::string space;
    std::size_t inv_H = 0;
    std::size_t n = 0;
    std::size_t coarse_dim = 0;
    std::size_t iterations = 0;
    bool converged = false;
    double kappa_est = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double walltime_s = 0.0;
};

/// One row per (record, space); failed spaces appear with converged=false and
/// nan estimates.
std::vector<CsvRow> tabulate(std::span<const RunRecord> records);

void emit_csv(std::ostream& out, std::span<const RunRecord> records);
void emit_csv(const std::filesystem::path& path, std::span<const RunRecord> records);

nlohmann::json to_json(const SolveReport& report);
nlohmann::json to_json(const SpectrumReport& report);
nlohmann::json to_json(const RunRecord& record);

}  // namespace schwarz
