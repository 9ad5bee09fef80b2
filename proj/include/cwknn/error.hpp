#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cwknn {

enum class ErrorCode {
  // data / parse
  WrongMagic,
  Truncated,
  ZeroDim,
  BadLabel,
  MalformedHeader,
  Io,
  // argument / domain
  InvalidArgument,
  LengthMismatch,
  EmptyPatch,
  DimensionMismatch,
  WindowTooLarge,
  DegenerateZero,
  NotEnoughNeighbors,
  EmptyCorpus,
  TemplateCountMismatch,
  EmptyTable,
  // configuration
  ConfigTooDeep,
  ConfigMismatch,
  CacheConfigMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cwknn
