#include "hitfit/report.hpp"

#include "hitfit/errors.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>

namespace hitfit {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json interval_json(const Interval& b) { return ordered_json::array({b.lo, b.hi}); }

ordered_json config_json(const FitConfig& config) {
    ordered_json bounds;
    if (config.media_bounds.empty()) {
        bounds["c"] = "default";
    } else {
        ordered_json lists = ordered_json::array();
        for (const Interval& b : config.media_bounds) {
            lists.push_back(interval_json(b));
        }
        bounds["c"] = lists;
    }
    bounds["D"] = interval_json(config.direct_bounds);
    bounds["P"] = interval_json(config.rumor_bounds);
    bounds["I0"] = config.initial_bounds ? interval_json(*config.initial_bounds) : ordered_json("auto");

    ordered_json j;
    j["bounds"] = bounds;
    j["n_starts"] = config.n_starts;
    j["seed"] = config.seed;
    j["refine_max_iters"] = config.refine_max_iters;
    j["refine_tolerance"] = config.refine_tolerance;
    j["fit_I0"] = config.fit_initial;
    j["episode_init"] = config.episode_init == EpisodeInit::chain ? "chain" : "refit";
    return j;
}

ordered_json result_json(const FitResult& result) {
    ordered_json params;
    params["c"] = result.params.media_gain;
    params["D"] = result.params.direct_rate;
    params["P"] = result.params.rumor_rate;
    params["I0"] = result.params.initial_interest;

    ordered_json j;
    j["label"] = result.window.label;
    j["start_index"] = result.window.start_index;
    j["end_index"] = result.window.end_index;
    j["params"] = params;
    j["sse"] = result.sse;
    j["rmse"] = result.rmse;
    j["r_squared"] = result.r_squared ? ordered_json(*result.r_squared) : ordered_json(nullptr);
    j["n_evaluations"] = result.n_evaluations;
    j["converged"] = result.converged;
    return j;
}

} // namespace

std::string render_report(const RunReport& report) {
    ordered_json j;
    j["tool"] = "hitfit";
    j["version"] = report.tool_version;
    j["command"] = report.command;
    ordered_json inputs = ordered_json::array();
    for (const InputDigest& input : report.inputs) {
        inputs.push_back({{"path", input.path}, {"sha256", input.sha256}});
    }
    j["inputs"] = inputs;
    j["sim_options"] = {{"integrator", integrator_name(report.sim_options.integrator)},
                        {"dt", report.grid_dt},
                        {"blowup_cap", report.sim_options.blowup_cap},
                        {"clamp_nonnegative", report.sim_options.clamp_nonnegative}};
    j["fit_config"] = config_json(report.fit_config);
    j["channels"] = report.channel_names;
    ordered_json results = ordered_json::array();
    for (const FitResult& result : report.results) {
        results.push_back(result_json(result));
    }
    j["results"] = results;
    j["wall_clock_seconds"] = report.wall_clock_seconds;
    return j.dump(2) + "\n";
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for hashing");
    }

    const std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw IoError("cannot initialize SHA-256");
    }
    char buffer[1 << 16];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        if (EVP_DigestUpdate(ctx.get(), buffer, static_cast<std::size_t>(in.gcount())) != 1) {
            throw IoError("SHA-256 update failed");
        }
    }

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
        throw IoError("SHA-256 finalization failed");
    }
    std::string hex(static_cast<std::size_t>(length) * 2, '0');
    for (unsigned int i = 0; i < length; ++i) {
        std::snprintf(hex.data() + 2 * i, 3, "%02x", digest[i]);
    }
    return hex;
}

} // namespace hitfit
