#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace normcast {

enum class ErrorCode {
  NotFound,
  InvalidArgument,
  OutOfRange,
  DimensionMismatch,
  IncompleteProfile,
  NoCommonElements,
  NoSimilarUsers,
  EmptySample,
  InvalidConfidence,
  MissingConfidence,
  OutOfScale,
  ParseError,
  DuplicateEntry,
  InvalidSpec,
  InvalidSplit,
  UndefinedCorrelation,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace normcast
