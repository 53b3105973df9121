#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hitfit {

// Every failure carries a stable machine-readable code next to the human
// message. The CLI prints "error[<code>]: <message>" on a single line and
// exits nonzero, so callers can match on the code.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    [[nodiscard]] const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define HITFIT_DEFINE_ERROR(Name)                     \
    class Name : public Error {                       \
    public:                                           \
        explicit Name(const std::string& message)     \
            : Error(#Name, message) {}                \
    }

HITFIT_DEFINE_ERROR(InvalidArgument);
HITFIT_DEFINE_ERROR(DimensionMismatch);
HITFIT_DEFINE_ERROR(BlowupDetected);
HITFIT_DEFINE_ERROR(InvalidWindow);
HITFIT_DEFINE_ERROR(EmptyBounds);
HITFIT_DEFINE_ERROR(ScheduleOutOfRange);
HITFIT_DEFINE_ERROR(UnsortedSchedule);
HITFIT_DEFINE_ERROR(ParseError);
HITFIT_DEFINE_ERROR(NonMonotonicDates);
HITFIT_DEFINE_ERROR(NegativeCount);
HITFIT_DEFINE_ERROR(MissingData);
HITFIT_DEFINE_ERROR(DuplicateChannelDate);
HITFIT_DEFINE_ERROR(NoOverlap);
HITFIT_DEFINE_ERROR(GridTooLarge);
HITFIT_DEFINE_ERROR(IoError);

#undef HITFIT_DEFINE_ERROR

} // namespace hitfit
