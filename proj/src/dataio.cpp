#include "hitfit/dataio.hpp"

#include "hitfit/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace hitfit {
namespace io {

namespace {

constexpr double unfilled = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t");
    return text.substr(first, last - first + 1);
}

struct Row {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
};

std::vector<Row> read_csv(const std::filesystem::path& path, const std::string& expected_header,
                          std::size_t n_fields) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }

    std::string line;
    std::size_t line_no = 0;
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line_no == 1) {
            if (line != expected_header) {
                throw ParseError(path.string() + ": line 1: header must be '" + expected_header + "', got '" +
                                 line + "'");
            }
            continue;
        }
        Row row;
        row.line_no = line_no;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            row.fields.push_back(trim(field));
        }
        if (line.back() == ',') {
            row.fields.emplace_back();
        }
        if (row.fields.size() != n_fields) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) + ": expected " +
                             std::to_string(n_fields) + " comma-separated fields, got " +
                             std::to_string(row.fields.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(path.string() + ": no data rows");
    }
    return rows;
}

std::string location(const std::filesystem::path& path, std::size_t line_no) {
    return path.string() + ": line " + std::to_string(line_no) + ": ";
}

double parse_value(const std::string& text, const std::filesystem::path& path, std::size_t line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw ParseError(location(path, line_no) + "not a finite number: '" + text + "'");
    }
    return value;
}

Date parse_date_field(const std::string& text, const std::filesystem::path& path, std::size_t line_no) {
    try {
        return parse_date(text);
    } catch (const Error& e) {
        throw ParseError(location(path, line_no) + e.what());
    }
}

// Fills NaN gaps in `values` according to the policy. `observed` marks grid
// indices that came from actual rows, in increasing order.
void fill_missing(std::vector<double>& values, const std::vector<int>& observed, MissingPolicy policy,
                  const TimeGrid& grid, const std::string& what) {
    if (observed.size() == values.size()) {
        return;
    }
    switch (policy) {
    case MissingPolicy::error:
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (std::isnan(values[k])) {
                throw MissingData(what + " has no value for " + format_date(grid.date_at(static_cast<int>(k))));
            }
        }
        return;
    case MissingPolicy::zero:
        for (double& v : values) {
            if (std::isnan(v)) {
                v = 0.0;
            }
        }
        return;
    case MissingPolicy::linear_interpolate:
        // Flat before the first and after the last observation, linear in
        // every interior gap.
        for (int k = 0; k < observed.front(); ++k) {
            values[static_cast<std::size_t>(k)] = values[static_cast<std::size_t>(observed.front())];
        }
        for (std::size_t i = 1; i < observed.size(); ++i) {
            const int lo = observed[i - 1];
            const int hi = observed[i];
            for (int k = lo + 1; k < hi; ++k) {
                const double t = static_cast<double>(k - lo) / static_cast<double>(hi - lo);
                values[static_cast<std::size_t>(k)] =
                    values[static_cast<std::size_t>(lo)] +
                    t * (values[static_cast<std::size_t>(hi)] - values[static_cast<std::size_t>(lo)]);
            }
        }
        for (std::size_t k = static_cast<std::size_t>(observed.back()) + 1; k < values.size(); ++k) {
            values[k] = values[static_cast<std::size_t>(observed.back())];
        }
        return;
    }
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

} // namespace

TimeSeries read_counts(const std::filesystem::path& path, MissingPolicy policy) {
    const std::vector<Row> rows = read_csv(path, "date,count", 2);

    std::vector<std::pair<Date, double>> points;
    points.reserve(rows.size());
    for (const Row& row : rows) {
        const Date date = parse_date_field(row.fields[0], path, row.line_no);
        const double value = parse_value(row.fields[1], path, row.line_no);
        if (value < 0.0) {
            throw NegativeCount(location(path, row.line_no) + "negative count " + row.fields[1]);
        }
        if (!points.empty() && !(points.back().first < date)) {
            throw NonMonotonicDates(location(path, row.line_no) + "date " + row.fields[0] +
                                    " is not after the previous row");
        }
        points.emplace_back(date, value);
    }

    if (points.size() < 2) {
        throw ParseError(path.string() + ": a series needs at least two days, got " +
                         std::to_string(points.size()));
    }
    const TimeGrid grid{points.front().first,
                        static_cast<int>((points.back().first - points.front().first).count()), 1.0};
    std::vector<double> values(grid.size(), unfilled);
    std::vector<int> observed;
    observed.reserve(points.size());
    for (const auto& [date, value] : points) {
        const int k = *grid.index_of(date);
        values[static_cast<std::size_t>(k)] = value;
        observed.push_back(k);
    }
    fill_missing(values, observed, policy, grid, "counts file '" + path.string() + "'");
    return {grid, std::move(values)};
}

ExposureSet read_exposures(const std::filesystem::path& path, MissingPolicy policy) {
    const std::vector<Row> rows = read_csv(path, "date,channel,value", 3);

    std::vector<std::string> channel_order;
    std::map<std::string, std::vector<std::pair<Date, double>>> channel_points;
    Date min_date = Date::max();
    Date max_date = Date::min();
    for (const Row& row : rows) {
        const Date date = parse_date_field(row.fields[0], path, row.line_no);
        const std::string& channel = row.fields[1];
        if (channel.empty()) {
            throw ParseError(location(path, row.line_no) + "empty channel name");
        }
        const double value = parse_value(row.fields[2], path, row.line_no);
        if (value < 0.0) {
            throw NegativeCount(location(path, row.line_no) + "negative exposure value " + row.fields[2]);
        }

        auto [it, inserted] = channel_points.try_emplace(channel);
        if (inserted) {
            channel_order.push_back(channel);
        }
        auto& points = it->second;
        if (!points.empty()) {
            if (points.back().first == date) {
                throw DuplicateChannelDate(location(path, row.line_no) + "channel '" + channel +
                                           "' already has a value for " + row.fields[0]);
            }
            if (date < points.back().first) {
                throw NonMonotonicDates(location(path, row.line_no) + "channel '" + channel +
                                        "' dates are not increasing at " + row.fields[0]);
            }
        }
        points.emplace_back(date, value);
        min_date = std::min(min_date, date);
        max_date = std::max(max_date, date);
    }

    if (!(min_date < max_date)) {
        throw ParseError(path.string() + ": exposures need at least two distinct days");
    }
    const TimeGrid grid{min_date, static_cast<int>((max_date - min_date).count()), 1.0};
    std::vector<ExposureChannel> channels;
    channels.reserve(channel_order.size());
    for (const std::string& name : channel_order) {
        std::vector<double> values(grid.size(), unfilled);
        std::vector<int> observed;
        for (const auto& [date, value] : channel_points[name]) {
            const int k = *grid.index_of(date);
            values[static_cast<std::size_t>(k)] = value;
            observed.push_back(k);
        }
        fill_missing(values, observed, policy, grid, "exposure channel '" + name + "'");
        channels.push_back({name, TimeSeries{grid, std::move(values)}});
    }
    return {grid, std::move(channels)};
}

EpisodeSchedule read_schedule(const std::filesystem::path& path) {
    const std::vector<Row> rows = read_csv(path, "episode,date", 2);
    std::vector<EpisodeEntry> entries;
    entries.reserve(rows.size());
    for (const Row& row : rows) {
        if (row.fields[0].empty()) {
            throw ParseError(location(path, row.line_no) + "empty episode label");
        }
        entries.push_back({row.fields[0], parse_date_field(row.fields[1], path, row.line_no)});
    }
    return EpisodeSchedule{std::move(entries)};
}

void write_counts(const TimeSeries& series, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << "date,count\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        out << format_date(series.grid().date_at(static_cast<int>(k))) << ',' << format_real(series[k]) << '\n';
    }
    if (!out.flush()) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

void write_exposures(const ExposureSet& exposures, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << "date,channel,value\n";
    for (const ExposureChannel& channel : exposures.channels()) {
        for (std::size_t k = 0; k < channel.series.size(); ++k) {
            out << format_date(exposures.grid().date_at(static_cast<int>(k))) << ',' << channel.name << ','
                << format_real(channel.series[k]) << '\n';
        }
    }
    if (!out.flush()) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

TimeSeries schedule_to_impulses(const EpisodeSchedule& schedule, const TimeGrid& grid, double magnitude) {
    if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
        throw InvalidArgument("impulse magnitude must be finite and nonnegative");
    }
    std::vector<double> values(grid.size(), 0.0);
    for (const EpisodeEntry& entry : schedule.entries()) {
        const std::optional<int> index = grid.index_of(entry.date);
        if (!index) {
            throw ScheduleOutOfRange("broadcast '" + entry.label + "' (" + format_date(entry.date) +
                                     ") is outside the grid");
        }
        values[static_cast<std::size_t>(*index)] = magnitude;
    }
    return {grid, std::move(values)};
}

std::pair<TimeSeries, ExposureSet> align(const TimeSeries& observed, const ExposureSet& exposures) {
    const TimeGrid& a = observed.grid();
    const TimeGrid& b = exposures.grid();
    if (a.dt != 1.0 || b.dt != 1.0) {
        throw InvalidArgument("alignment works on daily grids");
    }
    const Date lo = std::max(a.t0, b.t0);
    const Date hi = std::min(a.t0 + std::chrono::days{a.n_steps}, b.t0 + std::chrono::days{b.n_steps});
    const auto overlap_steps = (hi - lo).count();
    if (overlap_steps < 1) {
        throw NoOverlap("observed series (" + format_date(a.t0) + "..) and exposures (" + format_date(b.t0) +
                        "..) share fewer than two days");
    }

    const TimeGrid grid{lo, static_cast<int>(overlap_steps), 1.0};
    auto slice = [&](const TimeSeries& series) {
        const auto offset = static_cast<std::size_t>((lo - series.grid().t0).count());
        std::vector<double> values(series.values().begin() + static_cast<std::ptrdiff_t>(offset),
                                   series.values().begin() + static_cast<std::ptrdiff_t>(offset + grid.size()));
        return TimeSeries{grid, std::move(values)};
    };

    std::vector<ExposureChannel> channels;
    channels.reserve(exposures.channel_count());
    for (const ExposureChannel& channel : exposures.channels()) {
        channels.push_back({channel.name, slice(channel.series)});
    }
    return {slice(observed), ExposureSet{grid, std::move(channels)}};
}

void export_fit_curve(const FitResult& result, const TimeSeries& observed, const ExposureSet& exposures,
                      const std::filesystem::path& path, const SimOptions& options) {
    if (!(observed.grid() == exposures.grid())) {
        throw DimensionMismatch("observed series and exposures are not on the same grid");
    }
    const Window& window = result.window;
    const std::vector<double> model =
        simulate_segment(result.params, exposures, window.start_index, window.end_index, options);

    std::ofstream out = open_for_write(path);
    out << "date,observed,model";
    for (const ExposureChannel& channel : exposures.channels()) {
        out << ',' << channel.name;
    }
    out << '\n';
    for (int k = window.start_index; k < window.end_index; ++k) {
        out << format_date(observed.grid().date_at(k)) << ',' << format_real(observed[static_cast<std::size_t>(k)])
            << ',' << format_real(model[static_cast<std::size_t>(k - window.start_index)]);
        for (const ExposureChannel& channel : exposures.channels()) {
            out << ',' << format_real(channel.series[static_cast<std::size_t>(k)]);
        }
        out << '\n';
    }
    if (!out.flush()) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

void export_episode_params(const std::vector<FitResult>& results, const std::filesystem::path& path,
                           std::span<const std::string> channel_names) {
    const std::size_t n_channels = results.empty() ? channel_names.size() : results.front().params.media_gain.size();
    if (!channel_names.empty() && channel_names.size() != n_channels) {
        throw DimensionMismatch("got " + std::to_string(channel_names.size()) + " channel names for " +
                                std::to_string(n_channels) + " media coefficients");
    }

    std::ofstream out = open_for_write(path);
    out << "episode_label";
    for (std::size_t c = 0; c < n_channels; ++c) {
        out << ",c_" << (channel_names.empty() ? std::to_string(c) : channel_names[c]);
    }
    out << ",D,P,I0,sse,rmse,r_squared\n";
    for (const FitResult& result : results) {
        if (result.params.media_gain.size() != n_channels) {
            throw DimensionMismatch("fit results disagree on the number of media coefficients");
        }
        out << result.window.label;
        for (double c : result.params.media_gain) {
            out << ',' << format_real(c);
        }
        out << ',' << format_real(result.params.direct_rate) << ',' << format_real(result.params.rumor_rate) << ','
            << format_real(result.params.initial_interest) << ',' << format_real(result.sse) << ','
            << format_real(result.rmse) << ',';
        if (result.r_squared) {
            out << format_real(*result.r_squared);
        }
        out << '\n';
    }
    if (!out.flush()) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

} // namespace io
} // namespace hitfit
