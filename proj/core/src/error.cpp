#include "sampdisc/error.hpp"

namespace sampdisc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::domain: return "domain";
    case ErrorCode::size_limit: return "size_limit";
    case ErrorCode::search_failure: return "search_failure";
    case ErrorCode::eigensolver: return "eigensolver";
    case ErrorCode::refinement_failure: return "refinement_failure";
    case ErrorCode::mapping_mismatch: return "mapping_mismatch";
    case ErrorCode::parse: return "parse";
    case ErrorCode::input: return "input";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

namespace {

std::string render(ErrorCode code, const std::string& stage, const std::string& message) {
  return "[" + stage + "] " + to_string(code) + ": " + message;
}

}  // namespace

Error::Error(ErrorCode code, std::string stage, std::string message)
    : std::runtime_error(render(code, stage, message)),
      code_(code),
      stage_(std::move(stage)),
      message_(std::move(message)) {}

Error Error::within(std::string_view outer) const {
  return Error(code_, std::string(outer) + "/" + stage_, message_);
}

}  // namespace sampdisc
