#include "qosc/format.hpp"

#include <charconv>
#include <system_error>

#include "qosc/errors.hpp"

namespace qosc {

std::string format_sig(double value, int digits) {
    if (digits < 1) {
        throw DomainError("significant-digit count must be positive");
    }
    char buffer[64];
    const std::to_chars_result res =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, digits);
    if (res.ec != std::errc{}) {
        throw NumericalError("number formatting failed");
    }
    return std::string(buffer, res.ptr);
}

} // namespace qosc
