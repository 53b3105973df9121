#pragma once

#include "hitfit/estimator.hpp"

#include <cstdint>
#include <vector>

namespace hitfit {
namespace synth {

enum class NoiseKind { none, gaussian_additive };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::none;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Simulated trajectory plus i.i.d. observation noise, clamped at zero when
/// the sim options clamp. sigma must be 0 when kind is none. Seeded and
/// reproducible.
[[nodiscard]] TimeSeries generate(const HitParams& params, const ExposureSet& exposures,
                                  const NoiseSpec& noise = {}, const SimOptions& options = {});

/// Cartesian parameter grid for the brute-force oracle: one value list per
/// media channel, plus lists for D, P and I0.
struct GridSpec {
    std::vector<std::vector<double>> media_values;
    std::vector<double> direct_values;
    std::vector<double> rumor_values;
    std::vector<double> initial_values;
    std::uint64_t max_points = 1'000'000;
};

struct GridSearchResult {
    HitParams params;
    double objective = 0.0;
};

/// Evaluates the fitting objective at every grid point and returns the
/// argmin. Ties (including the all-divergent case, where every objective is
/// the worst-objective sentinel) resolve to the lowest lexicographic index
/// tuple in axis order [c..., D, P, I0], so the result is deterministic and
/// independent of evaluation order.
[[nodiscard]] GridSearchResult grid_oracle(const TimeSeries& observed, const ExposureSet& exposures,
                                           const Window& window, const GridSpec& grid,
                                           const SimOptions& options = {});

} // namespace synth
} // namespace hitfit
