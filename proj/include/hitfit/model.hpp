#pragma once

#include "hitfit/types.hpp"

#include <vector>

namespace hitfit {

/// Instantaneous rate of change of interest:
///   sum_over_channels(c * A(t)) + D*I + P*I^2
/// with exposures read at grid point t_index.
[[nodiscard]] double rhs(const HitParams& params, const ExposureSet& exposures, int t_index, double interest);

/// Integrates the interest dynamics over the whole exposure grid, starting
/// from params.initial_interest. Exposures are held piecewise-constant over
/// each step. Step results below zero are clamped to 0 when
/// options.clamp_nonnegative is set; a step whose magnitude exceeds
/// options.blowup_cap (checked before clamping) raises BlowupDetected.
[[nodiscard]] TimeSeries simulate(const HitParams& params, const ExposureSet& exposures,
                                  const SimOptions& options = {});

/// Same dynamics restricted to grid indices [start, end), with interest equal
/// to params.initial_interest at index start. Returns end - start values.
[[nodiscard]] std::vector<double> simulate_segment(const HitParams& params, const ExposureSet& exposures, int start,
                                                   int end, const SimOptions& options = {});

struct SegmentOutcome {
    bool blew_up = false;
    int step = -1; ///< offset into the segment where the cap was exceeded
};

/// Non-throwing core used by optimizer loops: fills `out` with the trajectory
/// over [start, end) and reports divergence through the return value instead
/// of an exception. Precondition violations (bad window, channel-count
/// mismatch, non-finite parameters) still throw.
SegmentOutcome try_simulate_segment(const HitParams& params, const ExposureSet& exposures, int start, int end,
                                    const SimOptions& options, std::vector<double>& out);

} // namespace hitfit
