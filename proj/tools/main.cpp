#include "hitfit/dataio.hpp"
#include "hitfit/errors.hpp"
#include "hitfit/report.hpp"
#include "hitfit/synth.hpp"
#include "hitfit/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct CommonOptions {
    std::string out_dir = ".";
    std::string integrator = "euler";
    double dt = 1.0;
    double blowup_cap = 1e12;
    bool no_clamp = false;
    std::string missing_policy = "error";
};

struct FitOptions {
    std::string counts_path;
    std::string exposures_path;
    std::string bounds_path;
    std::uint64_t seed = 0;
    int n_starts = 64;
    int refine_max_iters = 500;
    double refine_tolerance = 1e-10;
    bool no_fit_i0 = false;
};

struct ParamFlags {
    std::string params_path;
    std::vector<double> media;
    double direct = 0.0;
    double rumor = 0.0;
    double initial = 0.0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--out-dir", opts.out_dir, "Directory for output files")->capture_default_str();
    cmd->add_option("--integrator", opts.integrator, "Integration scheme")
        ->check(CLI::IsMember({"euler", "rk4"}))
        ->capture_default_str();
    cmd->add_option("--dt", opts.dt, "Grid step in days (data files define daily grids, so this must be 1)")
        ->capture_default_str();
    cmd->add_option("--blowup-cap", opts.blowup_cap, "Interest magnitude treated as divergence")
        ->capture_default_str();
    cmd->add_flag("--no-clamp", opts.no_clamp, "Allow negative interest instead of clamping at 0");
    cmd->add_option("--missing-policy", opts.missing_policy, "How to fill days absent from input files")
        ->check(CLI::IsMember({"error", "zero", "interpolate"}))
        ->capture_default_str();
}

void add_fit_flags(CLI::App* cmd, FitOptions& opts) {
    cmd->add_option("--counts", opts.counts_path, "Observed daily counts file")->required();
    cmd->add_option("--exposures", opts.exposures_path, "Media exposures file")->required();
    cmd->add_option("--bounds", opts.bounds_path, "JSON file with parameter bounds");
    cmd->add_option("--seed", opts.seed, "Random-search seed")->capture_default_str();
    cmd->add_option("--starts", opts.n_starts, "Number of random starts")->capture_default_str();
    cmd->add_option("--refine-iters", opts.refine_max_iters, "Simplex refinement iteration budget")
        ->capture_default_str();
    cmd->add_option("--refine-tol", opts.refine_tolerance, "Relative objective change treated as converged")
        ->capture_default_str();
    cmd->add_flag("--no-fit-i0", opts.no_fit_i0, "Fix window-start interest to the first observed value");
}

void add_param_flags(CLI::App* cmd, ParamFlags& opts) {
    auto* file = cmd->add_option("--params", opts.params_path, "JSON parameter file with keys c, D, P, I0");
    cmd->add_option("--c", opts.media, "Media coefficient per exposure channel")->excludes(file);
    cmd->add_option("--D", opts.direct, "Direct-communication rate")->excludes(file);
    cmd->add_option("--P", opts.rumor, "Indirect-communication (rumor) coefficient")->excludes(file);
    cmd->add_option("--I0", opts.initial, "Initial interest")->excludes(file);
}

hitfit::SimOptions make_sim_options(const CommonOptions& opts) {
    hitfit::SimOptions options;
    options.integrator = opts.integrator == "rk4" ? hitfit::Integrator::rk4 : hitfit::Integrator::euler_forward;
    options.blowup_cap = opts.blowup_cap;
    options.clamp_nonnegative = !opts.no_clamp;
    return options;
}

hitfit::io::MissingPolicy make_policy(const std::string& name) {
    if (name == "zero") {
        return hitfit::io::MissingPolicy::zero;
    }
    if (name == "interpolate") {
        return hitfit::io::MissingPolicy::linear_interpolate;
    }
    return hitfit::io::MissingPolicy::error;
}

void require_daily_grid(const CommonOptions& opts) {
    if (opts.dt != 1.0) {
        throw hitfit::InvalidArgument("dated input files define a daily grid; --dt must be 1.0");
    }
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw hitfit::IoError("cannot open '" + path + "' for reading");
    }
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::parse_error& e) {
        throw hitfit::ParseError(path + ": " + e.what());
    }
}

hitfit::Interval to_interval(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw hitfit::ParseError(what + " bounds must be a [lo, hi] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

hitfit::FitConfig make_fit_config(const FitOptions& opts, std::size_t n_channels) {
    hitfit::FitConfig config;
    config.seed = opts.seed;
    config.n_starts = opts.n_starts;
    config.refine_max_iters = opts.refine_max_iters;
    config.refine_tolerance = opts.refine_tolerance;
    config.fit_initial = !opts.no_fit_i0;
    if (opts.bounds_path.empty()) {
        return config;
    }

    const json j = load_json(opts.bounds_path);
    if (j.contains("c")) {
        const json& c = j["c"];
        if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
            config.media_bounds.assign(n_channels, to_interval(c, "c"));
        } else if (c.is_array()) {
            for (const json& pair : c) {
                config.media_bounds.push_back(to_interval(pair, "c"));
            }
        } else {
            throw hitfit::ParseError("'c' bounds must be [lo, hi] or a list of pairs");
        }
    }
    if (j.contains("D")) {
        config.direct_bounds = to_interval(j["D"], "D");
    }
    if (j.contains("P")) {
        config.rumor_bounds = to_interval(j["P"], "P");
    }
    if (j.contains("I0")) {
        config.initial_bounds = to_interval(j["I0"], "I0");
    }
    return config;
}

hitfit::HitParams make_params(const ParamFlags& opts) {
    if (opts.params_path.empty()) {
        return {opts.media, opts.direct, opts.rumor, opts.initial};
    }
    const json j = load_json(opts.params_path);
    for (const char* key : {"c", "D", "P", "I0"}) {
        if (!j.contains(key)) {
            throw hitfit::ParseError(opts.params_path + ": missing key '" + std::string(key) + "'");
        }
    }
    hitfit::HitParams params;
    params.media_gain = j["c"].get<std::vector<double>>();
    params.direct_rate = j["D"].get<double>();
    params.rumor_rate = j["P"].get<double>();
    params.initial_interest = j["I0"].get<double>();
    return params;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out || !(out << text).flush()) {
        throw hitfit::IoError("cannot write '" + path.string() + "'");
    }
}

std::vector<hitfit::InputDigest> digest_inputs(const std::vector<std::string>& paths) {
    std::vector<hitfit::InputDigest> digests;
    for (const std::string& path : paths) {
        if (!path.empty()) {
            digests.push_back({path, hitfit::sha256_file(path)});
        }
    }
    return digests;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- commands -------------------------------------------------------------

struct SimulateCommand {
    CommonOptions common;
    std::string exposures_path;
    ParamFlags params;

    void run() const {
        require_daily_grid(common);
        const hitfit::ExposureSet exposures =
            hitfit::io::read_exposures(exposures_path, make_policy(common.missing_policy));
        const hitfit::TimeSeries series = hitfit::simulate(make_params(params), exposures, make_sim_options(common));
        fs::create_directories(common.out_dir);
        const fs::path out = fs::path(common.out_dir) / "simulated.csv";
        hitfit::io::write_counts(series, out);
        std::cout << "wrote " << out.string() << "\n";
    }
};

struct FitCommand {
    CommonOptions common;
    FitOptions fit;

    void run() const {
        const auto started = std::chrono::steady_clock::now();
        require_daily_grid(common);
        const auto policy = make_policy(common.missing_policy);
        const auto [observed, exposures] =
            hitfit::io::align(hitfit::io::read_counts(fit.counts_path, policy),
                              hitfit::io::read_exposures(fit.exposures_path, policy));

        const hitfit::SimOptions options = make_sim_options(common);
        const hitfit::FitConfig config = make_fit_config(fit, exposures.channel_count());
        const hitfit::FitResult result = hitfit::fit_full_run(observed, exposures, config, options);

        fs::create_directories(common.out_dir);
        const fs::path curve = fs::path(common.out_dir) / "fit_curve.csv";
        hitfit::io::export_fit_curve(result, observed, exposures, curve, options);

        hitfit::RunReport report{hitfit::tool_version,
                                 "fit",
                                 digest_inputs({fit.counts_path, fit.exposures_path, fit.bounds_path}),
                                 options,
                                 common.dt,
                                 config,
                                 exposures.channel_names(),
                                 {result},
                                 seconds_since(started)};
        const fs::path report_path = fs::path(common.out_dir) / "report.json";
        write_text(report_path, hitfit::render_report(report));

        std::printf("fit: sse=%.6g rmse=%.6g%s converged=%s\n", result.sse, result.rmse,
                    result.r_squared ? (" r_squared=" + std::to_string(*result.r_squared)).c_str() : "",
                    result.converged ? "yes" : "no");
        std::cout << "wrote " << curve.string() << " and " << report_path.string() << "\n";
    }
};

struct FitWindowsCommand {
    CommonOptions common;
    FitOptions fit;
    std::string schedule_path;
    std::string episode_init = "refit";

    void run() const {
        const auto started = std::chrono::steady_clock::now();
        require_daily_grid(common);
        const auto policy = make_policy(common.missing_policy);
        const auto [observed, exposures] =
            hitfit::io::align(hitfit::io::read_counts(fit.counts_path, policy),
                              hitfit::io::read_exposures(fit.exposures_path, policy));
        const hitfit::EpisodeSchedule schedule = hitfit::io::read_schedule(schedule_path);

        const hitfit::SimOptions options = make_sim_options(common);
        hitfit::FitConfig config = make_fit_config(fit, exposures.channel_count());
        config.episode_init =
            episode_init == "chain" ? hitfit::EpisodeInit::chain : hitfit::EpisodeInit::refit;
        const std::vector<hitfit::FitResult> results =
            hitfit::fit_per_episode(observed, exposures, schedule, config, options);

        fs::create_directories(common.out_dir);
        const fs::path table = fs::path(common.out_dir) / "episode_params.csv";
        const std::vector<std::string> names = exposures.channel_names();
        hitfit::io::export_episode_params(results, table, names);

        hitfit::RunReport report{hitfit::tool_version,
                                 "fit-windows",
                                 digest_inputs({fit.counts_path, fit.exposures_path, schedule_path,
                                                fit.bounds_path}),
                                 options,
                                 common.dt,
                                 config,
                                 names,
                                 results,
                                 seconds_since(started)};
        const fs::path report_path = fs::path(common.out_dir) / "report.json";
        write_text(report_path, hitfit::render_report(report));

        std::cout << "fit " << results.size() << " windows\n";
        std::cout << "wrote " << table.string() << " and " << report_path.string() << "\n";
    }
};

struct SynthCommand {
    CommonOptions common;
    ParamFlags params;
    std::string exposures_path;
    std::string schedule_path;
    int days = 0;
    double impulse_magnitude = 1.0;
    std::string channel_name = "tv";
    std::string noise = "none";
    double sigma = 0.0;
    std::uint64_t seed = 0;

    void run() const {
        require_daily_grid(common);
        fs::create_directories(common.out_dir);

        std::optional<hitfit::ExposureSet> exposures;
        std::optional<fs::path> exposures_out;
        if (!exposures_path.empty()) {
            exposures = hitfit::io::read_exposures(exposures_path, make_policy(common.missing_policy));
        } else {
            if (schedule_path.empty() || days < 1) {
                throw hitfit::InvalidArgument(
                    "synth needs either --exposures or a --schedule with --days to build impulse exposures");
            }
            const hitfit::EpisodeSchedule schedule = hitfit::io::read_schedule(schedule_path);
            const hitfit::TimeGrid grid{schedule.entries().front().date, days, 1.0};
            hitfit::TimeSeries impulses = hitfit::io::schedule_to_impulses(schedule, grid, impulse_magnitude);
            exposures.emplace(grid, std::vector<hitfit::ExposureChannel>{{channel_name, std::move(impulses)}});
            exposures_out = fs::path(common.out_dir) / "exposures.csv";
            hitfit::io::write_exposures(*exposures, *exposures_out);
        }

        hitfit::synth::NoiseSpec noise_spec;
        noise_spec.kind = noise == "gaussian" ? hitfit::synth::NoiseKind::gaussian_additive
                                              : hitfit::synth::NoiseKind::none;
        noise_spec.sigma = sigma;
        noise_spec.seed = seed;

        const hitfit::HitParams generating = make_params(params);
        const hitfit::TimeSeries series =
            hitfit::synth::generate(generating, *exposures, noise_spec, make_sim_options(common));

        const fs::path counts = fs::path(common.out_dir) / "counts.csv";
        hitfit::io::write_counts(series, counts);

        ordered_json j;
        j["c"] = generating.media_gain;
        j["D"] = generating.direct_rate;
        j["P"] = generating.rumor_rate;
        j["I0"] = generating.initial_interest;
        j["noise"] = {{"kind", noise}, {"sigma", sigma}, {"seed", seed}};
        const fs::path params_out = fs::path(common.out_dir) / "params.json";
        write_text(params_out, j.dump(2) + "\n");

        std::cout << "wrote " << counts.string() << " and " << params_out.string();
        if (exposures_out) {
            std::cout << " and " << exposures_out->string();
        }
        std::cout << "\n";
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Word-of-mouth attention dynamics: simulate daily interest driven by media exposure and "
                 "fit its parameters to observed count series"};
    app.set_version_flag("--version", std::string(hitfit::tool_version));
    app.require_subcommand(1);

    SimulateCommand simulate_cmd;
    auto* simulate_app = app.add_subcommand("simulate", "Integrate the model over an exposure file");
    add_common(simulate_app, simulate_cmd.common);
    simulate_app->add_option("--exposures", simulate_cmd.exposures_path, "Media exposures file")->required();
    add_param_flags(simulate_app, simulate_cmd.params);
    simulate_app->callback([&] { simulate_cmd.run(); });

    FitCommand fit_cmd;
    auto* fit_app = app.add_subcommand("fit", "Fit parameters over the whole observed series");
    add_common(fit_app, fit_cmd.common);
    add_fit_flags(fit_app, fit_cmd.fit);
    fit_app->callback([&] { fit_cmd.run(); });

    FitWindowsCommand windows_cmd;
    auto* windows_app = app.add_subcommand("fit-windows", "Fit parameters independently per broadcast window");
    add_common(windows_app, windows_cmd.common);
    add_fit_flags(windows_app, windows_cmd.fit);
    windows_app->add_option("--schedule", windows_cmd.schedule_path, "Broadcast schedule file")->required();
    windows_app->add_option("--episode-init", windows_cmd.episode_init,
                            "Window-start interest: refit per window or chain from the previous window")
        ->check(CLI::IsMember({"refit", "chain"}))
        ->capture_default_str();
    windows_app->callback([&] { windows_cmd.run(); });

    SynthCommand synth_cmd;
    auto* synth_app = app.add_subcommand("synth", "Generate a synthetic counts file from known parameters");
    add_common(synth_app, synth_cmd.common);
    add_param_flags(synth_app, synth_cmd.params);
    synth_app->add_option("--exposures", synth_cmd.exposures_path, "Media exposures file");
    synth_app->add_option("--schedule", synth_cmd.schedule_path, "Broadcast schedule for impulse exposures");
    synth_app->add_option("--days", synth_cmd.days, "Grid length in days when building impulse exposures");
    synth_app->add_option("--impulse-magnitude", synth_cmd.impulse_magnitude, "Exposure value on broadcast days")
        ->capture_default_str();
    synth_app->add_option("--channel", synth_cmd.channel_name, "Name of the built impulse channel")
        ->capture_default_str();
    synth_app->add_option("--noise", synth_cmd.noise, "Observation noise kind")
        ->check(CLI::IsMember({"none", "gaussian"}))
        ->capture_default_str();
    synth_app->add_option("--sigma", synth_cmd.sigma, "Gaussian noise standard deviation")->capture_default_str();
    synth_app->add_option("--seed", synth_cmd.seed, "Noise seed")->capture_default_str();
    synth_app->callback([&] { synth_cmd.run(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const hitfit::Error& e) {
        std::cerr << "error[" << e.code() << "]: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error[Internal]: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
