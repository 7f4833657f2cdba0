#include "affperm/error.hpp"

namespace affperm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateResidue: return "DuplicateResidue";
    case ErrorKind::BadSum: return "BadSum";
    case ErrorKind::WindowOverflow: return "WindowOverflow";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::UnboundedInput: return "UnboundedInput";
    case ErrorKind::TooManyRanks: return "TooManyRanks";
    case ErrorKind::SizeTooSmall: return "SizeTooSmall";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::InvalidTuple: return "InvalidTuple";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidMeasure: return "InvalidMeasure";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::SampleOutsideUniverse: return "SampleOutsideUniverse";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace affperm
