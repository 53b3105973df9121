#pragma once

#include <chrono>
#include <string>

namespace hitfit {

/// Calendar day, kept as a count of days since the civil epoch so that day
/// arithmetic is plain integer arithmetic.
using Date = std::chrono::sys_days;

/// Parses "YYYY-MM-DD". Throws ParseError on malformed text or an invalid
/// calendar date (e.g. 2016-02-30).
[[nodiscard]] Date parse_date(const std::string& text);

/// Renders a Date as "YYYY-MM-DD".
[[nodiscard]] std::string format_date(Date date);

} // namespace hitfit
