#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtvcn {

enum class ErrorCode {
  DuplicateEdge,
  MissingEdge,
  SelfLoop,
  InvalidNode,
  TimeOutOfRange,
  NotAnEdge,
  IsolatedNode,
  EmptyGraph,
  InvalidParams,
  NotApplicable,
  TooFewRichNodes,
  InsufficientSamples,
  NotPowerLaw,
  WindowTooShort,
  Unreachable,
  NoFixedPointFound,
  ConfigInvalid,
  TooFewModels,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. Carries a machine-readable code next to the message.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace dtvcn
