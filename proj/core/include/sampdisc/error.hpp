#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sampdisc {

enum class ErrorCode {
  precondition,
  domain,
  size_limit,
  search_failure,
  eigensolver,
  refinement_failure,
  mapping_mismatch,
  parse,
  input,
  internal,
};

const char* to_string(ErrorCode code) noexcept;

/// Library-wide exception. Every error carries the pipeline stage that raised
/// it; pipelines prefix their own stage when propagating (see `within`).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string stage, std::string message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& message() const noexcept { return message_; }

  /// Same error, re-tagged as having happened inside `outer`.
  Error within(std::string_view outer) const;

 private:
  ErrorCode code_;
  std::string stage_;
  std::string message_;
};

}  // namespace sampdisc
