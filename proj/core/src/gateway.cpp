#include "catalyst/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>

#include "catalyst/prompts.hpp"
#include "catalyst/text.hpp"

namespace catalyst {

namespace {

// Length of a leading list marker including the whitespace after it, or 0.
std::size_t marker_length(std::string_view s) {
  if (s.empty()) return 0;
  std::size_t i = 0;
  if (std::isdigit(static_cast<unsigned char>(s[0]))) {
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size() || (s[i] != '.' && s[i] != ')')) return 0;
    ++i;
    // "1.5 meters" is a number, not a marker.
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) return 0;
  } else if (s[0] == '-' || s[0] == '*') {
    i = 1;
    if (i < s.size() && !text::is_space(s[i])) return 0;
  } else if (s.substr(0, 3) == "\xE2\x80\xA2") {  // U+2022 bullet
    i = 3;
  } else {
    return 0;
  }
  while (i < s.size() && text::is_space(s[i])) ++i;
  return i;
}

std::string strip_markers(std::string_view s) {
  s = text::trim(s);
  while (std::size_t m = marker_length(s)) s = text::trim(s.substr(m));
  return std::string(s);
}

}  // namespace

std::vector<std::string> extract_list_items(std::string_view completion) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (pos < completion.size()) {
    std::size_t nl = completion.find('\n', pos);
    if (nl == std::string_view::npos) nl = completion.size();
    std::string_view line = text::trim(completion.substr(pos, nl - pos));
    if (marker_length(line) > 0) {
      std::string item = strip_markers(line);
      if (!item.empty()) items.push_back(std::move(item));
    }
    pos = nl + 1;
  }
  return items;
}

std::vector<std::string> extract_interrogatives(std::string_view completion) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < completion.size(); ++i) {
    char c = completion[i];
    if (c == '?') {
      std::string q = text::flatten_whitespace(strip_markers(completion.substr(start, i + 1 - start)));
      if (q.size() > 1) out.push_back(std::move(q));
      start = i + 1;
    } else if (c == '.' || c == '!' || c == '\n') {
      // A marker like "3." at the start of a segment is not a sentence end.
      std::string_view so_far = text::trim(completion.substr(start, i - start));
      if (c == '.' && !so_far.empty() &&
          std::all_of(so_far.begin(), so_far.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
        continue;
      }
      start = i + 1;
    }
  }
  return out;
}

ParsedQuestions parse_questions(std::string_view completion, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidPrompt, "question count must be positive");
  auto take = [n](std::vector<std::string> items, RepairRung rung) {
    items.resize(n);
    return ParsedQuestions{std::move(items), rung};
  };
  auto items = extract_list_items(completion);
  if (items.size() >= n) return take(std::move(items), RepairRung::ListMarkers);
  auto sentences = extract_interrogatives(completion);
  if (sentences.size() >= n) return take(std::move(sentences), RepairRung::Interrogatives);
  throw Error(ErrorCode::TooFewQuestions, "completion contained " + std::to_string(std::max(items.size(), sentences.size())) +
                                              " usable questions, " + std::to_string(n) + " required");
}

std::vector<std::string> parse_question_list(std::string_view completion, std::size_t n) {
  return parse_questions(completion, n).questions;
}

LlmGateway::LlmGateway(std::shared_ptr<Provider> provider, RetryPolicy policy)
    : provider_(std::move(provider)), policy_(std::move(policy)) {
  if (!policy_.sleep) policy_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

LlmGateway LlmGateway::from_config(const ProviderConfig& config) {
  return LlmGateway(make_provider(config), RetryPolicy{config.max_retries, config.retry_backoff, 2.0, {}});
}

CompletionText LlmGateway::complete(const PromptRequest& request) const {
  if (request.rendered_text.empty()) throw Error(ErrorCode::InvalidPrompt, "prompt is empty");
  if (!(request.params.temperature >= 0.0 && request.params.temperature <= 2.0)) {
    throw Error(ErrorCode::InvalidPrompt, "temperature must lie in [0, 2]");
  }
  std::uint32_t attempts = policy_.max_retries + 1;
  for (std::uint32_t attempt = 1;; ++attempt) {
    try {
      return provider_->complete(request);
    } catch (const ProviderFailure& f) {
      if (!f.retryable()) throw;
      if (attempt >= attempts) {
        throw Error(f.code(), std::string(f.what()) + " (after " + std::to_string(attempts) + " attempts)");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ProviderError, std::string("provider failed: ") + e.what());
    }
    auto backoff = std::chrono::milliseconds(static_cast<std::int64_t>(
        static_cast<double>(policy_.initial_backoff.count()) * std::pow(policy_.multiplier, attempt - 1)));
    policy_.sleep(backoff);
  }
}

ParsedQuestions LlmGateway::generate_questions(const PromptRequest& request, std::size_t n) const {
  CompletionText first = complete(request);
  try {
    return parse_questions(first.text, n);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooFewQuestions) throw;
  }
  PromptRequest again = request;
  again.rendered_text += rerequest_instruction(n);
  CompletionText second = complete(again);
  ParsedQuestions parsed = parse_questions(second.text, n);
  parsed.rung = RepairRung::Rerequest;
  return parsed;
}

std::string LlmGateway::summarize(const PromptRequest& request) const {
  CompletionText c = complete(request);
  std::string_view t = text::trim(c.text);
  if (t.empty()) throw Error(ErrorCode::EmptyCompletion, "summarizer returned no text");
  return std::string(t);
}

CompletionText complete(const PromptRequest& request, const ProviderConfig& config) {
  return LlmGateway::from_config(config).complete(request);
}

}  // namespace catalyst
