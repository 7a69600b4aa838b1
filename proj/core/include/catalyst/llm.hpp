#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "catalyst/error.hpp"

namespace catalyst {

enum class TemplateId { Summarize, GenerateQuestions };

std::string_view to_string(TemplateId id) noexcept;

struct GenerationParams {
  double temperature = 0.7;  // [0, 2]
  std::uint32_t max_output_tokens = 1024;
};

struct PromptRequest {
  TemplateId template_id = TemplateId::Summarize;
  std::string rendered_text;
  GenerationParams params;
  // Set when the embedded input was head-truncated to fit the prompt budget.
  bool truncated = false;
};

struct CompletionText {
  std::string text;
  std::string provider_id;
  std::chrono::milliseconds latency{0};
};

enum class ProviderKind { Mock, Http };

std::string_view to_string(ProviderKind kind) noexcept;

struct ProviderConfig {
  ProviderKind kind = ProviderKind::Mock;
  std::string endpoint;    // http only, e.g. https://host/v1/chat/completions
  std::string model_name;  // http only
  // Name of the environment variable holding the API key, not the key itself.
  std::string api_key_ref = "CC_LLM_API_KEY";
  std::chrono::milliseconds timeout{30'000};
  std::uint32_t max_retries = 2;
  std::chrono::milliseconds retry_backoff{250};
  std::uint64_t seed = 0;  // mock only

  // Throws InvalidConfig.
  void validate() const;

  // Reads CC_LLM_KIND, CC_LLM_ENDPOINT, CC_LLM_MODEL, CC_LLM_TIMEOUT_MS,
  // CC_LLM_MAX_RETRIES and CC_MOCK_SEED; unset variables keep the defaults.
  static ProviderConfig from_env();
};

// Raised by providers. `retryable` distinguishes transient failures
// (connection refused, 5xx, rate limiting, timeouts) from final ones.
class ProviderFailure : public Error {
 public:
  ProviderFailure(ErrorCode code, const std::string& message, bool retryable)
      : Error(code, message), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string id() const = 0;
  // Single attempt; retry policy lives in LlmGateway.
  virtual CompletionText complete(const PromptRequest& request) = 0;
};

// Deterministic offline provider. Output is a pure function of
// (template_id, rendered_text, seed):
//  - summarize: the first N whitespace tokens of the embedded unit map,
//    cycled when the text is shorter, N being the requested word target;
//  - generate_questions: lines "i. What should students consider about
//    <label>? [h]" for i = 1..n, labels cycling in prompt order, h a short
//    hash of the rendered prompt.
class MockProvider final : public Provider {
 public:
  explicit MockProvider(std::uint64_t seed = 0) : seed_(seed) {}
  std::string id() const override { return "mock"; }
  CompletionText complete(const PromptRequest& request) override;

  std::string prompt_hash(const PromptRequest& request) const;

 private:
  std::uint64_t seed_;
};

// Minimal chat-completion client:
//   POST {model, messages:[{role:"user", content}], max_tokens, temperature}
//   reply text at choices[0].message.content
class HttpProvider final : public Provider {
 public:
  explicit HttpProvider(ProviderConfig config);
  std::string id() const override;
  CompletionText complete(const PromptRequest& request) override;

 private:
  ProviderConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

std::unique_ptr<Provider> make_provider(const ProviderConfig& config);

}  // namespace catalyst
