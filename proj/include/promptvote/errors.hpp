#pragma once

#include <stdexcept>
#include <string>

namespace promptvote {

enum class ErrorCode {
  UNKNOWN_TASK,
  MALFORMED_SPEC,
  PLACEHOLDER_UNRESOLVED,
  EMPTY_TOPIC_POOL,
  BACKEND_UNREACHABLE,
  HTTP_ERROR,
  EMPTY_COMPLETION,
  SCRIPT_EXHAUSTED,
  PARSE_EMPTY,
  TOPUP_EXHAUSTED,
  PARAPHRASE_SHORTFALL,
  ALL_ABSTAIN,
  CONFIG_INVALID,
  FILE_NOT_FOUND,
  RECORD_MALFORMED,
  MANIFEST_CORRUPT,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

  /// HTTP status for HTTP_ERROR, 0 otherwise (transport failure).
  int http_status = 0;

 private:
  ErrorCode code_;
};

}  // namespace promptvote
