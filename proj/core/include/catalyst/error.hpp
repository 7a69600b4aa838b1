#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace catalyst {

// Machine-readable failure categories. The string form (see to_string) is
// what travels over the wire in the `error` field of the API envelope.
enum class ErrorCode {
  // session_core
  NotFound,
  StoreFull,
  SummaryNotApproved,
  SerializationFailure,
  CorruptBlob,
  VersionMismatch,
  IdCollision,
  // document_ingest
  UnsupportedFormat,
  UnreadableFile,
  EmptyDocument,
  EmptyText,
  NoSummary,
  EmptyCompletion,
  SummarizationInFlight,
  // llm_gateway
  ProviderError,
  Timeout,
  AuthFailure,
  EmptyConcepts,
  TooFewQuestions,
  InvalidPrompt,
  // concept_graph
  NoApprovedSummary,
  InvalidSpan,
  BlankSpan,
  BlankLabel,
  NonFiniteCoordinate,
  NotInGraph,
  SelfEdge,
  DuplicateEdge,
  // question_synthesis
  EmptyGroup,
  GenerationInFlight,
  ConceptNotInGraph,
  // export_print
  EmptyBank,
  RenderFailure,
  // api_service
  PayloadTooLarge,
  BadRequest,
  BindFailure,
  DataDirUnwritable,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

// HTTP status used by the API envelope for a given code.
int http_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace catalyst
