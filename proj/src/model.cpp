#include "hitfit/model.hpp"

#include "hitfit/errors.hpp"

#include <cmath>
#include <string>

namespace hitfit {

namespace {

void validate_inputs(const HitParams& params, const ExposureSet& exposures, const SimOptions& options) {
    if (params.media_gain.size() != exposures.channel_count()) {
        throw DimensionMismatch("params have " + std::to_string(params.media_gain.size()) +
                                " media coefficients but the exposure set has " +
                                std::to_string(exposures.channel_count()) + " channels");
    }
    for (double c : params.media_gain) {
        if (!std::isfinite(c)) {
            throw InvalidArgument("media coefficients must be finite");
        }
    }
    if (!std::isfinite(params.direct_rate) || !std::isfinite(params.rumor_rate) ||
        !std::isfinite(params.initial_interest)) {
        throw InvalidArgument("model parameters must be finite");
    }
    if (params.initial_interest < 0.0) {
        throw InvalidArgument("initial interest must be nonnegative");
    }
    if (!(options.blowup_cap > 0.0)) {
        throw InvalidArgument("blowup cap must be positive");
    }
}

double exposure_drive(const HitParams& params, const ExposureSet& exposures, int k) {
    double drive = 0.0;
    for (std::size_t i = 0; i < exposures.channel_count(); ++i) {
        drive += params.media_gain[i] * exposures.channel(i).series.values()[static_cast<std::size_t>(k)];
    }
    return drive;
}

inline double rate(double drive, double direct, double rumor, double y) {
    return drive + direct * y + rumor * y * y;
}

// One integration step with the exposure drive frozen at its value for the
// step's interval.
inline double advance(double y, double drive, const HitParams& p, double dt, Integrator integrator) {
    if (integrator == Integrator::euler_forward) {
        return y + dt * rate(drive, p.direct_rate, p.rumor_rate, y);
    }
    const double k1 = rate(drive, p.direct_rate, p.rumor_rate, y);
    const double k2 = rate(drive, p.direct_rate, p.rumor_rate, y + 0.5 * dt * k1);
    const double k3 = rate(drive, p.direct_rate, p.rumor_rate, y + 0.5 * dt * k2);
    const double k4 = rate(drive, p.direct_rate, p.rumor_rate, y + dt * k3);
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

double rhs(const HitParams& params, const ExposureSet& exposures, int t_index, double interest) {
    validate_inputs(params, exposures, SimOptions{});
    if (t_index < 0 || static_cast<std::size_t>(t_index) >= exposures.grid().size()) {
        throw InvalidArgument("rhs index " + std::to_string(t_index) + " is outside the grid");
    }
    return rate(exposure_drive(params, exposures, t_index), params.direct_rate, params.rumor_rate, interest);
}

SegmentOutcome try_simulate_segment(const HitParams& params, const ExposureSet& exposures, int start, int end,
                                    const SimOptions& options, std::vector<double>& out) {
    validate_inputs(params, exposures, options);
    const int n_points = static_cast<int>(exposures.grid().size());
    if (start < 0 || end <= start || end > n_points) {
        throw InvalidWindow("segment [" + std::to_string(start) + ", " + std::to_string(end) +
                            ") does not fit a grid with " + std::to_string(n_points) + " points");
    }

    out.assign(static_cast<std::size_t>(end - start), 0.0);
    const double dt = exposures.grid().dt;
    double y = params.initial_interest;
    out[0] = y;
    if (!(std::fabs(y) <= options.blowup_cap)) {
        return {true, 0};
    }
    for (int k = start; k + 1 < end; ++k) {
        y = advance(y, exposure_drive(params, exposures, k), params, dt, options.integrator);
        // Cap check first: a step that shot past the cap is divergence even
        // if it landed negative. The !(<=) form also catches NaN.
        if (!(std::fabs(y) <= options.blowup_cap)) {
            return {true, k - start + 1};
        }
        if (options.clamp_nonnegative && y < 0.0) {
            y = 0.0;
        }
        out[static_cast<std::size_t>(k - start + 1)] = y;
    }
    return {false, -1};
}

std::vector<double> simulate_segment(const HitParams& params, const ExposureSet& exposures, int start, int end,
                                     const SimOptions& options) {
    std::vector<double> out;
    const SegmentOutcome outcome = try_simulate_segment(params, exposures, start, end, options, out);
    if (outcome.blew_up) {
        throw BlowupDetected("interest magnitude exceeded " + std::to_string(options.blowup_cap) + " at step " +
                             std::to_string(start + outcome.step));
    }
    return out;
}

TimeSeries simulate(const HitParams& params, const ExposureSet& exposures, const SimOptions& options) {
    return {exposures.grid(),
            simulate_segment(params, exposures, 0, static_cast<int>(exposures.grid().size()), options)};
}

} // namespace hitfit
