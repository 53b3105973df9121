#include "hitfit/estimator.hpp"

#include "hitfit/errors.hpp"
#include "hitfit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hitfit {

namespace {

void check_shared_grid(const TimeSeries& observed, const ExposureSet& exposures) {
    if (!(observed.grid() == exposures.grid())) {
        throw DimensionMismatch("observed series and exposures are not on the same grid");
    }
}

void check_window(const Window& window, const TimeGrid& grid) {
    if (window.start_index < 0 || window.end_index <= window.start_index ||
        static_cast<std::size_t>(window.end_index) > grid.size()) {
        throw InvalidWindow("window '" + window.label + "' [" + std::to_string(window.start_index) + ", " +
                            std::to_string(window.end_index) + ") does not fit a grid with " +
                            std::to_string(grid.size()) + " points");
    }
}

// Maps the flat optimizer vector onto HitParams. Coordinate order is part of
// the reproducibility contract: [c..., D, P, then I0 when fitted].
struct ParamLayout {
    std::size_t n_channels = 0;
    bool fit_initial = true;
    double fixed_initial = 0.0;

    [[nodiscard]] std::size_t dim() const { return n_channels + 2 + (fit_initial ? 1 : 0); }

    [[nodiscard]] HitParams unpack(std::span<const double> x) const {
        HitParams p;
        p.media_gain.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n_channels));
        p.direct_rate = x[n_channels];
        p.rumor_rate = x[n_channels + 1];
        p.initial_interest = fit_initial ? x[n_channels + 2] : fixed_initial;
        return p;
    }
};

Interval checked(Interval b, const char* what) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) {
        throw EmptyBounds(std::string(what) + " bounds [" + std::to_string(b.lo) + ", " + std::to_string(b.hi) +
                          "] are empty or not finite");
    }
    return b;
}

std::vector<Interval> resolve_bounds(const FitConfig& config, const ParamLayout& layout, double window_max) {
    std::vector<Interval> bounds;
    bounds.reserve(layout.dim());
    if (config.media_bounds.empty()) {
        bounds.assign(layout.n_channels, Interval{0.0, 1e3});
    } else if (config.media_bounds.size() == layout.n_channels) {
        for (const Interval& b : config.media_bounds) {
            bounds.push_back(checked(b, "media-coefficient"));
        }
    } else {
        throw DimensionMismatch("got " + std::to_string(config.media_bounds.size()) +
                                " media-coefficient bounds for " + std::to_string(layout.n_channels) + " channels");
    }
    bounds.push_back(checked(config.direct_bounds, "direct-rate"));
    bounds.push_back(checked(config.rumor_bounds, "rumor-rate"));
    if (layout.fit_initial) {
        Interval b = config.initial_bounds.value_or(Interval{0.0, 10.0 * window_max});
        b.lo = std::max(b.lo, 0.0); // interest cannot start negative
        bounds.push_back(checked(b, "initial-interest"));
    }
    return bounds;
}

FitResult fit_window(const TimeSeries& observed, const ExposureSet& exposures, const Window& window,
                     const FitConfig& config, const SimOptions& options, std::optional<double> initial_override) {
    check_shared_grid(observed, exposures);
    check_window(window, observed.grid());
    if (config.n_starts < 1) {
        throw InvalidArgument("need at least one random start");
    }

    ParamLayout layout;
    layout.n_channels = exposures.channel_count();
    layout.fit_initial = config.fit_initial && !initial_override.has_value();
    if (!layout.fit_initial) {
        layout.fixed_initial =
            initial_override.value_or(observed[static_cast<std::size_t>(window.start_index)]);
    }

    const int window_len = window.length();
    if (window_len < static_cast<int>(layout.dim()) + 1) {
        throw InvalidWindow("window '" + window.label + "' has " + std::to_string(window_len) +
                            " points but fitting " + std::to_string(layout.dim()) +
                            " free parameters needs at least " + std::to_string(layout.dim() + 1));
    }

    double window_max = 0.0;
    double window_sum = 0.0;
    for (int k = window.start_index; k < window.end_index; ++k) {
        window_max = std::max(window_max, observed[static_cast<std::size_t>(k)]);
        window_sum += observed[static_cast<std::size_t>(k)];
    }
    const std::vector<Interval> bounds = resolve_bounds(config, layout, window_max);

    long evaluations = 0;
    auto evaluate = [&](std::span<const double> x) {
        ++evaluations;
        return objective(layout.unpack(x), observed, exposures, window, options);
    };

    // Seeded random starts; strict < keeps the earliest of tied starts.
    std::vector<double> best_x(layout.dim());
    double best_f = worst_objective;
    std::vector<double> x(layout.dim());
    for (int k = 0; k < config.n_starts; ++k) {
        SplitMix64 rng = SplitMix64::derive(config.seed, static_cast<std::uint64_t>(k));
        for (std::size_t d = 0; d < layout.dim(); ++d) {
            x[d] = rng.next_uniform(bounds[d].lo, bounds[d].hi);
        }
        const double f = evaluate(x);
        if (k == 0 || f < best_f) {
            best_x = x;
            best_f = f;
        }
    }

    // Refine the winning start. Nelder-Mead is restarted with a fresh simplex
    // while it keeps making progress and iterations remain.
    bool converged = false;
    int iters_left = config.refine_max_iters;
    for (int round = 0; round < 8 && iters_left > 0; ++round) {
        SimplexOptions simplex_options;
        simplex_options.max_iterations = iters_left;
        simplex_options.tolerance = config.refine_tolerance;
        const SimplexResult refined = minimize_simplex(
            [&](std::span<const double> p) { return evaluate(p); }, best_x, bounds, simplex_options);
        iters_left -= refined.iterations;
        converged = refined.converged;
        const double improvement = best_f - refined.value;
        if (refined.value < best_f) {
            best_x = refined.point;
            best_f = refined.value;
        }
        if (!(improvement > config.refine_tolerance * (std::fabs(best_f) + 1e-300))) {
            break;
        }
    }

    FitResult result;
    result.window = window;
    result.params = layout.unpack(best_x);
    result.sse = best_f;
    result.rmse = std::sqrt(best_f / window_len);
    result.n_evaluations = evaluations;
    result.converged = converged;

    const double mean = window_sum / window_len;
    double tss = 0.0;
    for (int k = window.start_index; k < window.end_index; ++k) {
        const double d = observed[static_cast<std::size_t>(k)] - mean;
        tss += d * d;
    }
    if (tss > 0.0) {
        result.r_squared = 1.0 - best_f / tss;
    }
    return result;
}

} // namespace

double objective(const HitParams& params, const TimeSeries& observed, const ExposureSet& exposures,
                 const Window& window, const SimOptions& options) {
    check_shared_grid(observed, exposures);
    check_window(window, observed.grid());

    thread_local std::vector<double> model;
    const SegmentOutcome outcome =
        try_simulate_segment(params, exposures, window.start_index, window.end_index, options, model);
    if (outcome.blew_up) {
        return worst_objective;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const double d = model[i] - observed[static_cast<std::size_t>(window.start_index) + i];
        sse += d * d;
    }
    return sse;
}

FitResult fit(const TimeSeries& observed, const ExposureSet& exposures, const Window& window,
              const FitConfig& config, const SimOptions& options) {
    return fit_window(observed, exposures, window, config, options, std::nullopt);
}

FitResult fit_full_run(const TimeSeries& observed, const ExposureSet& exposures, const FitConfig& config,
                       const SimOptions& options) {
    const Window window{"full", 0, static_cast<int>(observed.grid().size())};
    return fit_window(observed, exposures, window, config, options, std::nullopt);
}

std::vector<FitResult> fit_per_episode(const TimeSeries& observed, const ExposureSet& exposures,
                                       const EpisodeSchedule& schedule, const FitConfig& config,
                                       const SimOptions& options) {
    check_shared_grid(observed, exposures);
    const TimeGrid& grid = observed.grid();

    std::vector<int> starts;
    starts.reserve(schedule.size());
    for (const EpisodeEntry& entry : schedule.entries()) {
        const std::optional<int> index = grid.index_of(entry.date);
        if (!index) {
            throw ScheduleOutOfRange("broadcast '" + entry.label + "' (" + format_date(entry.date) +
                                     ") is outside the observation grid");
        }
        starts.push_back(*index);
    }

    std::vector<FitResult> results;
    results.reserve(schedule.size());
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const int start = starts[k];
        const int end = k + 1 < starts.size() ? starts[k + 1] : static_cast<int>(grid.size());
        const Window window{schedule.entries()[k].label, start, end};

        std::optional<double> initial_override;
        if (config.episode_init == EpisodeInit::chain && k > 0) {
            // Continue from where the previous window's fitted model ended:
            // extend its trajectory one step past the window boundary.
            const FitResult& prev = results.back();
            std::vector<double> extended;
            const SegmentOutcome outcome = try_simulate_segment(prev.params, exposures, prev.window.start_index,
                                                                start + 1, options, extended);
            double chained = outcome.blew_up ? observed[static_cast<std::size_t>(start)] : extended.back();
            initial_override = std::max(chained, 0.0);
        }
        results.push_back(fit_window(observed, exposures, window, config, options, initial_override));
    }
    return results;
}

} // namespace hitfit
