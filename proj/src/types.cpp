#include "hitfit/types.hpp"

#include "hitfit/errors.hpp"

#include <cmath>
#include <unordered_set>

namespace hitfit {

TimeGrid::TimeGrid(Date start, int steps, double step_days) : t0(start), n_steps(steps), dt(step_days) {
    if (n_steps < 1) {
        throw InvalidArgument("time grid needs at least one step, got " + std::to_string(n_steps));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("time grid step must be a positive number of days");
    }
}

Date TimeGrid::date_at(int k) const {
    if (dt != 1.0) {
        throw InvalidArgument("grid points map to calendar dates only on daily grids (dt = 1)");
    }
    return t0 + std::chrono::days{k};
}

std::optional<int> TimeGrid::index_of(Date date) const {
    if (dt != 1.0) {
        return std::nullopt;
    }
    const auto offset = (date - t0).count();
    if (offset < 0 || offset > n_steps) {
        return std::nullopt;
    }
    return static_cast<int>(offset);
}

TimeSeries::TimeSeries(TimeGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw DimensionMismatch("series has " + std::to_string(values_.size()) + " values but the grid has " +
                                std::to_string(grid_.size()) + " points");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("series values must be finite");
        }
    }
}

ExposureSet::ExposureSet(TimeGrid grid, std::vector<ExposureChannel> channels)
    : grid_(grid), channels_(std::move(channels)) {
    std::unordered_set<std::string> seen;
    for (const auto& ch : channels_) {
        if (!(ch.series.grid() == grid_)) {
            throw DimensionMismatch("exposure channel '" + ch.name + "' is not on the shared grid");
        }
        if (!seen.insert(ch.name).second) {
            throw InvalidArgument("duplicate exposure channel name '" + ch.name + "'");
        }
        for (double v : ch.series.values()) {
            if (v < 0.0) {
                throw InvalidArgument("exposure channel '" + ch.name + "' has a negative value");
            }
        }
    }
}

std::vector<std::string> ExposureSet::channel_names() const {
    std::vector<std::string> names;
    names.reserve(channels_.size());
    for (const auto& ch : channels_) {
        names.push_back(ch.name);
    }
    return names;
}

const char* integrator_name(Integrator integrator) {
    return integrator == Integrator::euler_forward ? "euler" : "rk4";
}

} // namespace hitfit
