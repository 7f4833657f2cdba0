#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace affperm {

enum class ErrorKind {
  DuplicateResidue,
  BadSum,
  WindowOverflow,
  EmptyWindow,
  NotAPermutation,
  UnboundedInput,
  TooManyRanks,
  SizeTooSmall,
  CapExceeded,
  InvalidTuple,
  InvalidParams,
  InvalidMeasure,
  EmptyDomain,
  SampleOutsideUniverse,
};

std::string_view to_string(ErrorKind kind);

/// Domain or validation failure. The message names the violated invariant.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace affperm
