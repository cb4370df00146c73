#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conesemi {

enum class ErrorCode {
  MalformedProblem,
  NumericalFailure,
  DimensionTooLarge,
  DimensionMismatch,
  Singular,
  NormTooLarge,
  NotPointed,
  NotFullDimensional,
  NotLattice,
  NotPositive,
  EmptyPhi,
  NotGenerating,
  VariantPreconditionFailed,
  VariantUnsupported,
  Unbounded,
  EmptySubdifferential,
  NotInDomain,
  EmptyDomain,
  NotOrderUnit,
  NotRepresentable,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to a diagnostic without parsing text.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace conesemi
