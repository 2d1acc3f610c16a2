#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaze {

enum class ErrorCode {
  InvalidArgument,
  NonMonotonicTimestamp,
  OverlappingFixations,
  DegeneratePath,
  DuplicateName,
  UnknownLabel,
  NoGazeFix,
  ProtocolViolation,
  InsufficientGaze,
  SeparationUnsatisfiable,
  EmptySession,
  EmptyStore,
  ParseError,
  IoError,
  UnknownType,
  UnknownSession,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// All engine failures surface as gaze::Error; the C API maps the code to a
// status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the text-format readers; line is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail)
      : Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ": " + detail),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gaze
