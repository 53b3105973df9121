#pragma once

#include "hitfit/model.hpp"
#include "hitfit/nelder_mead.hpp"
#include "hitfit/schedule.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hitfit {

/// Half-open index range [start_index, end_index) on the observation grid.
struct Window {
    std::string label;
    int start_index = 0;
    int end_index = 0;

    [[nodiscard]] int length() const { return end_index - start_index; }
};

/// How per-episode fits choose the window-start interest.
enum class EpisodeInit {
    refit, ///< every window gets its own I0 (fitted or fixed per fit_initial)
    chain, ///< windows after the first start from the previous window's terminal model value
};

struct FitConfig {
    /// Per-channel bounds for the media coefficients; empty means [0, 1e3]
    /// for every channel.
    std::vector<Interval> media_bounds;
    Interval direct_bounds{-10.0, 10.0};
    Interval rumor_bounds{-1.0, 1.0};
    /// Bounds for the window-start interest; unset means
    /// [0, 10 * max(observed in window)]. Intersected with [0, inf) because
    /// interest cannot start negative; EmptyBounds if nothing remains.
    std::optional<Interval> initial_bounds;
    int n_starts = 64;
    std::uint64_t seed = 0;
    int refine_max_iters = 500;
    /// Relative objective change below which refinement is considered done.
    double refine_tolerance = 1e-10;
    /// When false, the window-start interest is fixed to the first observed
    /// value in the window instead of being fitted.
    bool fit_initial = true;
    EpisodeInit episode_init = EpisodeInit::refit;
};

struct FitResult {
    Window window;
    HitParams params;
    double sse = 0.0;
    double rmse = 0.0;
    /// 1 - sse/TSS; absent when the observed window is constant (TSS = 0).
    std::optional<double> r_squared;
    long n_evaluations = 0;
    bool converged = false;
};

/// Objective value reported for parameter sets whose trajectory diverges:
/// the search treats them as uniformly worst instead of failing.
inline constexpr double worst_objective = std::numeric_limits<double>::infinity();

/// Sum of squared differences between the model trajectory (restarted at the
/// window with params.initial_interest) and the observed series over the
/// window. Divergence inside the window yields worst_objective, not an error.
[[nodiscard]] double objective(const HitParams& params, const TimeSeries& observed, const ExposureSet& exposures,
                               const Window& window, const SimOptions& options = {});

/// Multi-start random search refined by bounded Nelder-Mead.
///
/// Start k draws its parameters from SplitMix64::derive(config.seed, k), one
/// uniform per coordinate in the order [c..., D, P, I0-if-fitted]; results
/// are therefore reproducible and independent of evaluation order. The best
/// start is refined by Nelder-Mead projected to the bounds (restarted while
/// it keeps improving, within the iteration budget). The returned sse never
/// exceeds the objective of any random start.
[[nodiscard]] FitResult fit(const TimeSeries& observed, const ExposureSet& exposures, const Window& window,
                            const FitConfig& config = {}, const SimOptions& options = {});

/// fit over the window covering the whole grid, labeled "full".
[[nodiscard]] FitResult fit_full_run(const TimeSeries& observed, const ExposureSet& exposures,
                                     const FitConfig& config = {}, const SimOptions& options = {});

/// One fit per broadcast window: episode k spans [broadcast_k, broadcast_k+1)
/// and the last window runs to the end of the series. Windows tile
/// [first broadcast, series end) with no gaps or overlaps.
[[nodiscard]] std::vector<FitResult> fit_per_episode(const TimeSeries& observed, const ExposureSet& exposures,
                                                     const EpisodeSchedule& schedule, const FitConfig& config = {},
                                                     const SimOptions& options = {});

} // namespace hitfit
