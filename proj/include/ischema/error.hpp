#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ischema {

enum class ErrorCode {
  DuplicateEntity,
  BadShapeForSort,
  NegativeExtent,
  UnknownSort,
  SortCycle,
  UnknownEntity,
  UnknownParameter,
  CoincidentCenters,
  NotMeasurable,
  UnknownRelation,
  UnsupportedShapePair,
  SortMismatch,
  UnboundSymbol,
  TimeOutOfRange,
  SortMismatchInBinding,
  MissingRole,
  ConflictingEffects,
  UnstratifiableRuleSet,
  NonPositiveDelta,
  UnknownSchema,
  SearchSpaceTooLarge,
  InvalidTrace,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every engine failure is reported through this one exception type; the code
// is what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ischema
