#include "panoptica/error.hpp"

namespace panoptica {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyName: return "EmptyName";
    case ErrorCode::DuplicateClass: return "DuplicateClass";
    case ErrorCode::DuplicateAttribute: return "DuplicateAttribute";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::UnknownTargetClass: return "UnknownTargetClass";
    case ErrorCode::InvalidAttribute: return "InvalidAttribute";
    case ErrorCode::ArityTooSmall: return "ArityTooSmall";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::InvalidVocabulary: return "InvalidVocabulary";
    case ErrorCode::VocabularyMismatch: return "VocabularyMismatch";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::MissingRequired: return "MissingRequired";
    case ErrorCode::DanglingLink: return "DanglingLink";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::HasIncomingLinks: return "HasIncomingLinks";
    case ErrorCode::RequiredLinkWouldDangle: return "RequiredLinkWouldDangle";
    case ErrorCode::MirrorViolation: return "MirrorViolation";
    case ErrorCode::CorruptStore: return "CorruptStore";
    case ErrorCode::UnpopulatedLink: return "UnpopulatedLink";
    case ErrorCode::NotFocused: return "NotFocused";
    case ErrorCode::NotInView: return "NotInView";
    case ErrorCode::ClassMismatch: return "ClassMismatch";
    case ErrorCode::PredicateKindMismatch: return "PredicateKindMismatch";
    case ErrorCode::EmptyPerception: return "EmptyPerception";
    case ErrorCode::EmptySource: return "EmptySource";
    case ErrorCode::NoHeaderRow: return "NoHeaderRow";
    case ErrorCode::NoCandidateClass: return "NoCandidateClass";
    case ErrorCode::InvalidMapping: return "InvalidMapping";
    case ErrorCode::AmbiguousLink: return "AmbiguousLink";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::BindFailure: return "BindFailure";
  }
  return "Unknown";
}

}  // namespace panoptica
