#include "catalyst/error.hpp"

namespace catalyst {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::StoreFull: return "store-full";
    case ErrorCode::SummaryNotApproved: return "summary-not-approved";
    case ErrorCode::SerializationFailure: return "serialization-failure";
    case ErrorCode::CorruptBlob: return "corrupt-blob";
    case ErrorCode::VersionMismatch: return "version-mismatch";
    case ErrorCode::IdCollision: return "id-collision";
    case ErrorCode::UnsupportedFormat: return "unsupported-format";
    case ErrorCode::UnreadableFile: return "unreadable-file";
    case ErrorCode::EmptyDocument: return "empty-document";
    case ErrorCode::EmptyText: return "empty-text";
    case ErrorCode::NoSummary: return "no-summary";
    case ErrorCode::EmptyCompletion: return "empty-completion";
    case ErrorCode::SummarizationInFlight: return "summarization-in-flight";
    case ErrorCode::ProviderError: return "provider-error";
    case ErrorCode::Timeout: return "timeout";
    case ErrorCode::AuthFailure: return "auth-failure";
    case ErrorCode::EmptyConcepts: return "empty-concepts";
    case ErrorCode::TooFewQuestions: return "too-few-questions";
    case ErrorCode::InvalidPrompt: return "invalid-prompt";
    case ErrorCode::NoApprovedSummary: return "no-approved-summary";
    case ErrorCode::InvalidSpan: return "invalid-span";
    case ErrorCode::BlankSpan: return "blank-span";
    case ErrorCode::BlankLabel: return "blank-label";
    case ErrorCode::NonFiniteCoordinate: return "non-finite-coordinate";
    case ErrorCode::NotInGraph: return "not-in-graph";
    case ErrorCode::SelfEdge: return "self-edge";
    case ErrorCode::DuplicateEdge: return "duplicate-edge";
    case ErrorCode::EmptyGroup: return "empty-group";
    case ErrorCode::GenerationInFlight: return "generation-in-flight";
    case ErrorCode::ConceptNotInGraph: return "concept-not-in-graph";
    case ErrorCode::EmptyBank: return "empty-bank";
    case ErrorCode::RenderFailure: return "render-failure";
    case ErrorCode::PayloadTooLarge: return "payload-too-large";
    case ErrorCode::BadRequest: return "bad-request";
    case ErrorCode::BindFailure: return "bind-failure";
    case ErrorCode::DataDirUnwritable: return "data-dir-unwritable";
    case ErrorCode::InvalidConfig: return "invalid-config";
  }
  return "unknown";
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::DuplicateEdge:
    case ErrorCode::GenerationInFlight:
    case ErrorCode::SummarizationInFlight:
    case ErrorCode::IdCollision:
      return 409;
    case ErrorCode::PayloadTooLarge:
      return 413;
    case ErrorCode::ProviderError:
    case ErrorCode::AuthFailure:
    case ErrorCode::EmptyCompletion:
    case ErrorCode::TooFewQuestions:
      return 502;
    case ErrorCode::Timeout:
      return 504;
    case ErrorCode::StoreFull:
      return 503;
    case ErrorCode::SerializationFailure:
    case ErrorCode::RenderFailure:
    case ErrorCode::InvalidPrompt:
    case ErrorCode::BindFailure:
    case ErrorCode::DataDirUnwritable:
    case ErrorCode::InvalidConfig:
      return 500;
    default:
      return 400;
  }
}

}  // namespace catalyst
