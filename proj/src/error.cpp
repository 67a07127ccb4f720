#include "normcast/error.hpp"

namespace normcast {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IncompleteProfile: return "IncompleteProfile";
    case ErrorCode::NoCommonElements: return "NoCommonElements";
    case ErrorCode::NoSimilarUsers: return "NoSimilarUsers";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::InvalidConfidence: return "InvalidConfidence";
    case ErrorCode::MissingConfidence: return "MissingConfidence";
    case ErrorCode::OutOfScale: return "OutOfScale";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidSplit: return "InvalidSplit";
    case ErrorCode::UndefinedCorrelation: return "UndefinedCorrelation";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace normcast
