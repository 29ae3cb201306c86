#include "metricsim/error.hpp"

namespace metricsim {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::degenerate_projection: return "degenerate_projection";
    case ErrorCode::format: return "format";
    case ErrorCode::range: return "range";
    case ErrorCode::integrity: return "integrity";
    case ErrorCode::alignment: return "alignment";
    case ErrorCode::config: return "config";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::undefined_correlation: return "undefined_correlation";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(error_code_name(code)) + ": " + message);
}

}  // namespace metricsim
