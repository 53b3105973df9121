#pragma once

#include "hitfit/date.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hitfit {

/// Uniform time grid with points t0 + k*dt days for k = 0..n_steps.
/// Data files always produce dt = 1 (daily counts); smaller steps are used by
/// integrator accuracy experiments on synthetic grids.
struct TimeGrid {
    Date t0{};
    int n_steps = 1;
    double dt = 1.0;

    TimeGrid() = default;
    TimeGrid(Date start, int steps, double step_days = 1.0);

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(n_steps) + 1; }

    /// Calendar date of grid point k. Only meaningful on daily grids; throws
    /// InvalidArgument when dt != 1.
    [[nodiscard]] Date date_at(int k) const;

    /// Grid index of a date on a daily grid, or nullopt when outside.
    [[nodiscard]] std::optional<int> index_of(Date date) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Immutable series of one real value per grid point.
class TimeSeries {
public:
    TimeSeries(TimeGrid grid, std::vector<double> values);

    [[nodiscard]] const TimeGrid& grid() const { return grid_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

/// One named media channel: its exposure series on the shared grid.
struct ExposureChannel {
    std::string name;
    TimeSeries series;
};

/// Named exposure channels, all on one grid, all values nonnegative.
class ExposureSet {
public:
    ExposureSet(TimeGrid grid, std::vector<ExposureChannel> channels);

    [[nodiscard]] const TimeGrid& grid() const { return grid_; }
    [[nodiscard]] std::size_t channel_count() const { return channels_.size(); }
    [[nodiscard]] const ExposureChannel& channel(std::size_t i) const { return channels_[i]; }
    [[nodiscard]] const std::vector<ExposureChannel>& channels() const { return channels_; }
    [[nodiscard]] std::vector<std::string> channel_names() const;

private:
    TimeGrid grid_;
    std::vector<ExposureChannel> channels_;
};

/// Model parameters. In file formats and exported tables these appear under
/// their conventional short names: c (one per channel), D, P, I0.
struct HitParams {
    std::vector<double> media_gain; ///< c: interest gained per exposure unit per day, one per channel
    double direct_rate = 0.0;       ///< D: linear word-of-mouth rate (1/day), may be negative (net decay)
    double rumor_rate = 0.0;        ///< P: quadratic rumor-effect coefficient (1/(interest*day))
    double initial_interest = 0.0;  ///< I0: interest at the start of the simulated span, >= 0
};

enum class Integrator { euler_forward, rk4 };

[[nodiscard]] const char* integrator_name(Integrator integrator);

struct SimOptions {
    Integrator integrator = Integrator::euler_forward;
    /// Any |I| beyond this is treated as divergence of the quadratic term.
    double blowup_cap = 1e12;
    /// Interest below zero is physically meaningless; clamp each step result
    /// at 0 unless disabled for numerical experiments.
    bool clamp_nonnegative = true;
};

} // namespace hitfit
