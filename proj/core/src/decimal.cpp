#include "sampdisc/decimal.hpp"

#include <charconv>
#include <system_error>

#include "sampdisc/error.hpp"

namespace sampdisc {

std::string format_decimal(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return {buffer, result.ptr};
}

double parse_decimal(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) {
    throw Error(ErrorCode::parse, "decimal", "not a decimal number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace sampdisc
