#include "hitfit/date.hpp"

#include "hitfit/errors.hpp"

#include <charconv>
#include <cstdio>

namespace hitfit {

namespace {

int parse_int_field(const std::string& text, std::size_t begin, std::size_t end) {
    int value = 0;
    const char* first = text.data() + begin;
    const char* last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("not a valid calendar date: '" + text + "'");
    }
    return value;
}

} // namespace

Date parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ParseError("not a valid calendar date: '" + text + "' (expected YYYY-MM-DD)");
    }
    const int y = parse_int_field(text, 0, 4);
    const int m = parse_int_field(text, 5, 7);
    const int d = parse_int_field(text, 8, 10);
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw ParseError("not a valid calendar date: '" + text + "'");
    }
    return Date{ymd};
}

std::string format_date(Date date) {
    const std::chrono::year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace hitfit
