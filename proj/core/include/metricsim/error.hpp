#pragma once

#include <stdexcept>
#include <string>

namespace metricsim {

enum class ErrorCode {
  dimension_mismatch,     // shapes of vectors/matrices disagree
  degenerate_input,       // zero-norm embedding fed to a cosine
  degenerate_projection,  // B maps a vector to zero
  format,                 // malformed input file
  range,                  // rating outside the declared scale
  integrity,              // duplicate pairs, self-pairs, undersized groups
  alignment,              // no pairs survived vocabulary alignment
  config,                 // invalid run configuration
  divergence,             // non-finite loss or gradient during training
  undefined_correlation,  // zero variance, correlation has no value
  precondition,           // caller violated an operation contract
  io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace metricsim
