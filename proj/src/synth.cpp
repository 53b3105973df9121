#include "hitfit/synth.hpp"

#include "hitfit/errors.hpp"
#include "hitfit/rng.hpp"

#include <cmath>
#include <string>

namespace hitfit {
namespace synth {

TimeSeries generate(const HitParams& params, const ExposureSet& exposures, const NoiseSpec& noise,
                    const SimOptions& options) {
    if (noise.sigma < 0.0 || !std::isfinite(noise.sigma)) {
        throw InvalidArgument("noise sigma must be finite and nonnegative");
    }
    if (noise.kind == NoiseKind::none && noise.sigma != 0.0) {
        throw InvalidArgument("noise sigma must be 0 when the noise kind is none");
    }

    TimeSeries clean = simulate(params, exposures, options);
    if (noise.kind == NoiseKind::none) {
        return clean;
    }

    std::vector<double> values = clean.values();
    SplitMix64 rng(noise.seed);
    for (double& v : values) {
        v += rng.next_gaussian(0.0, noise.sigma);
        if (options.clamp_nonnegative && v < 0.0) {
            v = 0.0;
        }
    }
    return {clean.grid(), std::move(values)};
}

GridSearchResult grid_oracle(const TimeSeries& observed, const ExposureSet& exposures, const Window& window,
                             const GridSpec& grid, const SimOptions& options) {
    const std::size_t n_channels = exposures.channel_count();
    if (grid.media_values.size() != n_channels) {
        throw DimensionMismatch("grid has " + std::to_string(grid.media_values.size()) +
                                " media-value lists but the exposure set has " + std::to_string(n_channels) +
                                " channels");
    }

    // Axis order [c..., D, P, I0]; the last axis varies fastest.
    std::vector<const std::vector<double>*> axes;
    for (const auto& values : grid.media_values) {
        axes.push_back(&values);
    }
    axes.push_back(&grid.direct_values);
    axes.push_back(&grid.rumor_values);
    axes.push_back(&grid.initial_values);

    std::uint64_t cardinality = 1;
    for (const auto* axis : axes) {
        if (axis->empty()) {
            throw InvalidArgument("every grid axis needs at least one value");
        }
        cardinality *= axis->size();
        if (cardinality > grid.max_points) {
            throw GridTooLarge("parameter grid exceeds the " + std::to_string(grid.max_points) + "-point cap");
        }
    }

    std::vector<std::size_t> index(axes.size(), 0);
    HitParams params;
    params.media_gain.resize(n_channels);

    GridSearchResult best;
    for (std::uint64_t point = 0; point < cardinality; ++point) {
        for (std::size_t c = 0; c < n_channels; ++c) {
            params.media_gain[c] = (*axes[c])[index[c]];
        }
        params.direct_rate = (*axes[n_channels])[index[n_channels]];
        params.rumor_rate = (*axes[n_channels + 1])[index[n_channels + 1]];
        params.initial_interest = (*axes[n_channels + 2])[index[n_channels + 2]];

        const double f = objective(params, observed, exposures, window, options);
        if (point == 0 || f < best.objective) {
            best.params = params;
            best.objective = f;
        }

        for (std::size_t d = axes.size(); d-- > 0;) {
            if (++index[d] < axes[d]->size()) {
                break;
            }
            index[d] = 0;
        }
    }
    return best;
}

} // namespace synth
} // namespace hitfit
