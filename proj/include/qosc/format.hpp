#pragma once

#include <string>

namespace qosc {

/// Formats a double with the given number of significant digits (default 10)
/// using std::to_chars: shortest of fixed/scientific, '.' decimal separator,
/// no locale dependence — identical output on every platform.
std::string format_sig(double value, int digits = 10);

} // namespace qosc
