#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace panoptica {

// Stable machine-readable codes, shared by the CLI and the HTTP gateway.
enum class ErrorCode {
  EmptyName,
  DuplicateClass,
  DuplicateAttribute,
  UnknownClass,
  UnknownAttribute,
  UnknownTargetClass,
  InvalidAttribute,
  ArityTooSmall,
  InvalidLabel,
  InvalidVocabulary,
  VocabularyMismatch,
  UnknownObject,
  KindMismatch,
  MissingRequired,
  DanglingLink,
  DuplicateKey,
  HasIncomingLinks,
  RequiredLinkWouldDangle,
  MirrorViolation,
  CorruptStore,
  UnpopulatedLink,
  NotFocused,
  NotInView,
  ClassMismatch,
  PredicateKindMismatch,
  EmptyPerception,
  EmptySource,
  NoHeaderRow,
  NoCandidateClass,
  InvalidMapping,
  AmbiguousLink,
  UnsupportedFormat,
  ParseError,
  IoError,
  UnknownSession,
  BindFailure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace panoptica
