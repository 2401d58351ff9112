// Command-line driver: single runs and weak-scaling sweeps of the one- and
// two-level Schwarz preconditioners.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "schwarz/harness.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level overlapping additive Schwarz with GDSW, RGDSW and AMS coarse spaces"};

    std::string config_path;
    std::size_t subdomains = 0, hh = 0, overlap = 0, max_iter = 0;
    std::string coeff, spaces, sweep, out, json_out, dump_coeff, dump_basis;
    double contrast = 0.0, tol = 0.0;
    bool spectrum = false;

    app.add_option("--config", config_path, "JSON configuration file; flags override it")->check(CLI::ExistingFile);
    auto* o_sub = app.add_option("--subdomains", subdomains, "Subdomains per side (1/H)");
    auto* o_hh = app.add_option("--hh", hh, "Elements per subdomain side (H/h)");
    auto* o_overlap = app.add_option("--overlap", overlap, "Overlap in algebraic layers");
    auto* o_coeff = app.add_option("--coeff", coeff, "Coefficient layout")
                        ->check(CLI::IsMember({"constant", "inclusions", "channels"}));
    auto* o_contrast = app.add_option("--contrast", contrast, "High/low coefficient ratio");
    auto* o_spaces = app.add_option("--spaces", spaces, "Comma list from none,GDSW,RGDSW,AMS");
    auto* o_tol = app.add_option("--tol", tol, "Relative residual tolerance");
    auto* o_max = app.add_option("--max-iter", max_iter, "PCG iteration cap");
    auto* o_spec = app.add_flag("--spectrum", spectrum, "Compute the dense spectrum of the preconditioned operator");
    auto* o_sweep = app.add_option("--sweep", sweep, "Comma list of subdomains-per-side for a weak-scaling sweep");
    auto* o_out = app.add_option("--out", out, "CSV output path (stdout if omitted)");
    auto* o_json = app.add_option("--json", json_out, "Full JSON record output path");
    auto* o_dc = app.add_option("--dump-coeff", dump_coeff, "Write the coefficient grid");
    auto* o_db = app.add_option("--dump-basis", dump_basis, "Write coarse basis rasters");

    CLI11_PARSE(app, argc, argv);

    try {
        schwarz::ExperimentConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            config = schwarz::config_from_json(nlohmann::json::parse(in));
        }
        if (o_sub->count()) config.subdomains_per_side = subdomains;
        if (o_hh->count()) config.h_ratio = hh;
        if (o_overlap->count()) config.overlap = overlap;
        if (o_coeff->count()) config.coefficient = schwarz::coefficient_kind_from_string(coeff);
        if (o_contrast->count()) config.contrast = contrast;
        if (o_spaces->count()) {
            config.spaces.clear();
            for (const auto& s : split_list(spaces)) config.spaces.push_back(schwarz::space_from_string(s));
        }
        if (o_tol->count()) config.tol = tol;
        if (o_max->count()) config.max_iter = max_iter;
        if (o_spec->count()) config.spectrum = spectrum;
        if (o_sweep->count()) {
            config.sweep.clear();
            for (const auto& s : split_list(sweep)) config.sweep.push_back(std::stoul(s));
        }
        if (o_out->count()) config.out = out;
        if (o_json->count()) config.json_out = json_out;
        if (o_dc->count()) config.dump_coeff = dump_coeff;
        if (o_db->count()) config.dump_basis = dump_basis;
        config.validate();

        std::vector<schwarz::RunRecord> records;
        if (config.sweep.empty()) {
            records.push_back(schwarz::run_single(config));
        } else {
            records = schwarz::run_scaling(config, config.sweep);
        }

        for (const auto& rec : records) {
            for (const auto& res : rec.results) {
                if (!res.failure.empty()) {
                    std::cerr << "warning: " << schwarz::to_string(res.space) << " at 1/H=" << rec.config.subdomains_per_side
                              << " failed: " << res.failure << '\n';
                }
            }
        }
        if (config.out.empty()) {
            schwarz::emit_csv(std::cout, records);
        } else {
            schwarz::emit_csv(config.out, records);
        }
        if (!config.json_out.empty()) {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& rec : records) j.push_back(schwarz::to_json(rec));
            std::ofstream jout(config.json_out);
            if (!jout) throw std::runtime_error("cannot open '" + config.json_out + "' for writing");
            jout << j.dump(2) << '\n';
        }
    } catch (const schwarz::ConfigError& e) {
        std::cerr << "usage error (" << e.field() << "): " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
