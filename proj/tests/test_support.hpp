#pragma once

#include "hitfit/types.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace test_support {

inline hitfit::Date day0() { return hitfit::parse_date("2020-01-01"); }

inline hitfit::TimeGrid make_grid(int n_steps, double dt = 1.0) { return {day0(), n_steps, dt}; }

inline hitfit::TimeSeries constant_series(const hitfit::TimeGrid& grid, double value) {
    return {grid, std::vector<double>(grid.size(), value)};
}

inline hitfit::ExposureSet single_channel(const hitfit::TimeGrid& grid, std::vector<double> values,
                                          const std::string& name = "tv") {
    return {grid, {{name, hitfit::TimeSeries{grid, std::move(values)}}}};
}

inline hitfit::ExposureSet zero_exposures(const hitfit::TimeGrid& grid, const std::string& name = "tv") {
    return single_channel(grid, std::vector<double>(grid.size(), 0.0), name);
}

/// Impulses of `magnitude` every `period` steps starting at index 0.
inline hitfit::ExposureSet periodic_impulses(const hitfit::TimeGrid& grid, int period, double magnitude,
                                             const std::string& name = "tv") {
    std::vector<double> values(grid.size(), 0.0);
    for (std::size_t k = 0; k < values.size(); k += static_cast<std::size_t>(period)) {
        values[k] = magnitude;
    }
    return single_channel(grid, std::move(values), name);
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("hitfit_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace test_support
