#pragma once

#include <string>
#include <string_view>

namespace sampdisc {

/// Shortest decimal string that round-trips to the same double.
std::string format_decimal(double value);

/// Parses a full decimal string; throws ErrorCode::parse on trailing junk.
double parse_decimal(std::string_view text);

}  // namespace sampdisc
