#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "catalyst/llm.hpp"

namespace catalyst {

// Which step of the repair ladder produced the questions.
enum class RepairRung {
  ListMarkers = 1,     // numbered / bulleted lines
  Interrogatives = 2,  // prose split into sentences ending in '?'
  Rerequest = 3,       // second completion after an explicit format reminder
};

struct ParsedQuestions {
  std::vector<std::string> questions;
  RepairRung rung = RepairRung::ListMarkers;
};

// Lines starting with `digits.`, `digits)`, `-`, `*` or `•`, markers stripped.
std::vector<std::string> extract_list_items(std::string_view completion);

// Sentences ending in '?', each trimmed and stripped of list markers.
std::vector<std::string> extract_interrogatives(std::string_view completion);

// Rungs 1 and 2 of the ladder. Keeps the first n candidates; throws
// TooFewQuestions when neither rung yields n.
ParsedQuestions parse_questions(std::string_view completion, std::size_t n);
std::vector<std::string> parse_question_list(std::string_view completion, std::size_t n);

struct RetryPolicy {
  std::uint32_t max_retries = 2;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for
};

// Stateless front door to a provider; safe to share across threads as long
// as the provider is.
class LlmGateway {
 public:
  LlmGateway(std::shared_ptr<Provider> provider, RetryPolicy policy);
  static LlmGateway from_config(const ProviderConfig& config);

  // One logical completion: the provider is retried on transient failures
  // with exponential backoff, up to policy.max_retries extra attempts.
  CompletionText complete(const PromptRequest& request) const;

  // Full ladder: parse, then one re-request with a format reminder, then
  // TooFewQuestions.
  ParsedQuestions generate_questions(const PromptRequest& request, std::size_t n) const;

  // Summary text for a built summarize prompt; EmptyCompletion when blank.
  std::string summarize(const PromptRequest& request) const;

  const Provider& provider() const noexcept { return *provider_; }

 private:
  std::shared_ptr<Provider> provider_;
  RetryPolicy policy_;
};

// Convenience: builds a provider for `config` and runs one retried completion.
CompletionText complete(const PromptRequest& request, const ProviderConfig& config);

}  // namespace catalyst
