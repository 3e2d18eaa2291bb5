#include "promptvote/errors.hpp"

namespace promptvote {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UNKNOWN_TASK: return "UNKNOWN_TASK";
    case ErrorCode::MALFORMED_SPEC: return "MALFORMED_SPEC";
    case ErrorCode::PLACEHOLDER_UNRESOLVED: return "PLACEHOLDER_UNRESOLVED";
    case ErrorCode::EMPTY_TOPIC_POOL: return "EMPTY_TOPIC_POOL";
    case ErrorCode::BACKEND_UNREACHABLE: return "BACKEND_UNREACHABLE";
    case ErrorCode::HTTP_ERROR: return "HTTP_ERROR";
    case ErrorCode::EMPTY_COMPLETION: return "EMPTY_COMPLETION";
    case ErrorCode::SCRIPT_EXHAUSTED: return "SCRIPT_EXHAUSTED";
    case ErrorCode::PARSE_EMPTY: return "PARSE_EMPTY";
    case ErrorCode::TOPUP_EXHAUSTED: return "TOPUP_EXHAUSTED";
    case ErrorCode::PARAPHRASE_SHORTFALL: return "PARAPHRASE_SHORTFALL";
    case ErrorCode::ALL_ABSTAIN: return "ALL_ABSTAIN";
    case ErrorCode::CONFIG_INVALID: return "CONFIG_INVALID";
    case ErrorCode::FILE_NOT_FOUND: return "FILE_NOT_FOUND";
    case ErrorCode::RECORD_MALFORMED: return "RECORD_MALFORMED";
    case ErrorCode::MANIFEST_CORRUPT: return "MANIFEST_CORRUPT";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

}  // namespace promptvote
