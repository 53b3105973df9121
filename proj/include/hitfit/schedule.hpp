#pragma once

#include "hitfit/types.hpp"

#include <string>
#include <vector>

namespace hitfit {

struct EpisodeEntry {
    std::string label;
    Date date;
};

/// Ordered broadcast dates. Each entry opens the analysis window that runs
/// until the day before the next broadcast (the last one runs to the end of
/// the observed series).
class EpisodeSchedule {
public:
    explicit EpisodeSchedule(std::vector<EpisodeEntry> entries);

    [[nodiscard]] const std::vector<EpisodeEntry>& entries() const { return entries_; }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }

private:
    std::vector<EpisodeEntry> entries_;
};

} // namespace hitfit
