#pragma once

#include "hitfit/estimator.hpp"
#include "hitfit/schedule.hpp"
#include "hitfit/types.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hitfit {
namespace io {

/// What to do with days that have no row in an input file.
enum class MissingPolicy { zero, linear_interpolate, error };

/// Reads a counts file (header "date,count", rows "YYYY-MM-DD,<value>") into
/// a daily series spanning [first date, last date]. Dates must be strictly
/// increasing and values nonnegative; gaps are filled per policy.
[[nodiscard]] TimeSeries read_counts(const std::filesystem::path& path,
                                     MissingPolicy policy = MissingPolicy::error);

/// Reads a long-format exposures file (header "date,channel,value"). Channels
/// are ordered by first appearance; every channel is placed on the union
/// daily grid with missing days filled per policy (linear interpolation
/// extends flat beyond a channel's first/last observation).
[[nodiscard]] ExposureSet read_exposures(const std::filesystem::path& path,
                                         MissingPolicy policy = MissingPolicy::error);

/// Reads a schedule file (header "episode,date").
[[nodiscard]] EpisodeSchedule read_schedule(const std::filesystem::path& path);

/// Writes a daily series in the counts format, reals with 17 significant
/// digits so a read round-trips exactly.
void write_counts(const TimeSeries& series, const std::filesystem::path& path);

/// Writes an exposure set in the long format read_exposures expects.
void write_exposures(const ExposureSet& exposures, const std::filesystem::path& path);

/// Series that is `magnitude` on broadcast days and 0 elsewhere; stand-in
/// exposure channel for TV broadcasts when no measured series exists.
[[nodiscard]] TimeSeries schedule_to_impulses(const EpisodeSchedule& schedule, const TimeGrid& grid,
                                              double magnitude);

/// Restricts both inputs to their common date range. NoOverlap when the
/// ranges share fewer than two days (a grid needs at least one step).
[[nodiscard]] std::pair<TimeSeries, ExposureSet> align(const TimeSeries& observed, const ExposureSet& exposures);

/// Plot-ready table for one fitted window: date, observed, model, then one
/// column per exposure channel.
void export_fit_curve(const FitResult& result, const TimeSeries& observed, const ExposureSet& exposures,
                      const std::filesystem::path& path, const SimOptions& options = {});

/// Per-episode parameter table: episode_label, each c, D, P, I0, sse, rmse,
/// r_squared (blank when undefined). Channel names label the c columns;
/// when omitted the columns are c_0, c_1, ...
void export_episode_params(const std::vector<FitResult>& results, const std::filesystem::path& path,
                           std::span<const std::string> channel_names = {});

} // namespace io
} // namespace hitfit
