#include "hitfit/schedule.hpp"

#include "hitfit/errors.hpp"

namespace hitfit {

EpisodeSchedule::EpisodeSchedule(std::vector<EpisodeEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw InvalidArgument("episode schedule has no entries");
    }
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (!(entries_[i - 1].date < entries_[i].date)) {
            throw UnsortedSchedule("broadcast dates must be strictly increasing: '" + entries_[i - 1].label +
                                   "' (" + format_date(entries_[i - 1].date) + ") is not before '" +
                                   entries_[i].label + "' (" + format_date(entries_[i].date) + ")");
        }
    }
}

} // namespace hitfit
