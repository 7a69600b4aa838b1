#include "catalyst/llm.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "catalyst/prompts.hpp"
#include "catalyst/text.hpp"

namespace catalyst {

std::string_view to_string(TemplateId id) noexcept {
  return id == TemplateId::Summarize ? "summarize" : "generate_questions";
}

std::string_view to_string(ProviderKind kind) noexcept { return kind == ProviderKind::Mock ? "mock" : "http"; }

void ProviderConfig::validate() const {
  if (kind == ProviderKind::Http) {
    if (endpoint.empty()) throw Error(ErrorCode::InvalidConfig, "http provider requires an endpoint");
    if (model_name.empty()) throw Error(ErrorCode::InvalidConfig, "http provider requires a model name");
    if (endpoint.rfind("http://", 0) != 0 && endpoint.rfind("https://", 0) != 0) {
      throw Error(ErrorCode::InvalidConfig, "endpoint must start with http:// or https://");
    }
  }
  if (timeout.count() <= 0) throw Error(ErrorCode::InvalidConfig, "provider timeout must be positive");
}

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

template <typename T>
T env_number(const char* name, T fallback) {
  auto v = env(name);
  if (!v) return fallback;
  T out{};
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || p != v->data() + v->size()) {
    throw Error(ErrorCode::InvalidConfig, std::string(name) + " is not a valid number: '" + *v + "'");
  }
  return out;
}

}  // namespace

ProviderConfig ProviderConfig::from_env() {
  ProviderConfig cfg;
  if (auto kind = env("CC_LLM_KIND")) {
    if (*kind == "mock") {
      cfg.kind = ProviderKind::Mock;
    } else if (*kind == "http") {
      cfg.kind = ProviderKind::Http;
    } else {
      throw Error(ErrorCode::InvalidConfig, "CC_LLM_KIND must be 'mock' or 'http'");
    }
  }
  if (auto v = env("CC_LLM_ENDPOINT")) cfg.endpoint = *v;
  if (auto v = env("CC_LLM_MODEL")) cfg.model_name = *v;
  cfg.timeout = std::chrono::milliseconds(env_number<std::int64_t>("CC_LLM_TIMEOUT_MS", cfg.timeout.count()));
  cfg.max_retries = env_number<std::uint32_t>("CC_LLM_MAX_RETRIES", cfg.max_retries);
  cfg.seed = env_number<std::uint64_t>("CC_MOCK_SEED", cfg.seed);
  return cfg;
}

// --- mock ----------------------------------------------------------------------

namespace {

std::optional<std::size_t> number_after(std::string_view s, std::string_view marker) {
  std::size_t p = s.find(marker);
  if (p == std::string_view::npos) return std::nullopt;
  p += marker.size();
  std::size_t v = 0;
  auto [end, ec] = std::from_chars(s.data() + p, s.data() + s.size(), v);
  if (ec != std::errc{}) return std::nullopt;
  return v;
}

std::string mock_summary(std::string_view prompt) {
  auto target = number_after(prompt, "in approximately ");
  constexpr std::string_view open = "UNIT MAP:\n<<<\n";
  std::size_t b = prompt.find(open);
  std::size_t e = prompt.rfind("\n>>>");
  if (!target || b == std::string_view::npos || e == std::string_view::npos || e < b + open.size()) return {};
  auto words = text::split_words(prompt.substr(b + open.size(), e - b - open.size()));
  if (words.empty()) return {};
  std::string out;
  for (std::size_t i = 0; i < *target; ++i) {
    if (i) out.push_back(' ');
    out.append(words[i % words.size()]);
  }
  return out;
}

std::vector<std::string> mock_labels(std::string_view prompt) {
  std::vector<std::string> labels;
  std::size_t p = prompt.find("\nCONCEPTS:\n");
  if (p == std::string_view::npos) return labels;
  p += 11;
  while (p < prompt.size() && prompt.substr(p, 2) == "- ") {
    std::size_t nl = prompt.find('\n', p);
    if (nl == std::string_view::npos) nl = prompt.size();
    std::string label = unescape_line(prompt.substr(p + 2, nl - p - 2));
    labels.push_back(text::flatten_whitespace(label));
    p = nl + 1;
  }
  return labels;
}

}  // namespace

std::string MockProvider::prompt_hash(const PromptRequest& request) const {
  std::uint64_t h = text::fnv1a64(std::to_string(seed_));
  h = text::fnv1a64(to_string(request.template_id), h);
  h = text::fnv1a64("\n", h);
  h = text::fnv1a64(request.rendered_text, h);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 8);
}

CompletionText MockProvider::complete(const PromptRequest& request) {
  CompletionText out;
  out.provider_id = id();
  const std::string& prompt = request.rendered_text;
  if (request.template_id == TemplateId::Summarize) {
    out.text = mock_summary(prompt);
    return out;
  }
  auto n = number_after(prompt, "Write exactly ");
  std::vector<std::string> labels = mock_labels(prompt);
  if (!n || labels.empty()) return out;
  std::string h = prompt_hash(request);
  for (std::size_t i = 1; i <= *n; ++i) {
    if (i > 1) out.text.push_back('\n');
    out.text += std::to_string(i) + ". What should students consider about " + labels[(i - 1) % labels.size()] +
                "? [" + h + "]";
  }
  return out;
}

// --- http ----------------------------------------------------------------------

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) {
  config_.validate();
  std::size_t scheme_end = config_.endpoint.find("://");
  std::size_t path_start = config_.endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = config_.endpoint;
    path_ = "/";
  } else {
    scheme_host_port_ = config_.endpoint.substr(0, path_start);
    path_ = config_.endpoint.substr(path_start);
  }
}

std::string HttpProvider::id() const { return "http:" + config_.model_name; }

CompletionText HttpProvider::complete(const PromptRequest& request) {
  using nlohmann::json;
  auto started = std::chrono::steady_clock::now();

  httplib::Client client(scheme_host_port_);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (auto key = env(config_.api_key_ref.c_str())) headers.emplace("Authorization", "Bearer " + *key);

  json body = {
      {"model", config_.model_name},
      {"messages", json::array({{{"role", "user"}, {"content", request.rendered_text}}})},
      {"max_tokens", request.params.max_output_tokens},
      {"temperature", request.params.temperature},
  };
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    auto err = res.error();
    bool timed_out = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                     err == httplib::Error::Write;
    throw ProviderFailure(timed_out ? ErrorCode::Timeout : ErrorCode::ProviderError,
                          "request to " + scheme_host_port_ + " failed: " + httplib::to_string(err), true);
  }
  if (res->status == 401 || res->status == 403) {
    throw ProviderFailure(ErrorCode::AuthFailure, "provider rejected credentials (HTTP " + std::to_string(res->status) + ")",
                          false);
  }
  if (res->status != 200) {
    bool transient = res->status == 408 || res->status == 429 || res->status >= 500;
    throw ProviderFailure(ErrorCode::ProviderError, "provider returned HTTP " + std::to_string(res->status), transient);
  }

  json reply = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
  const json* content = nullptr;
  if (reply.is_object() && reply.contains("choices") && reply["choices"].is_array() && !reply["choices"].empty()) {
    const json& choice = reply["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string()) {
      content = &choice["message"]["content"];
    }
  }
  if (!content) throw ProviderFailure(ErrorCode::ProviderError, "malformed provider reply", false);

  CompletionText out;
  out.text = content->get<std::string>();
  out.provider_id = id();
  out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  return out;
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config) {
  config.validate();
  if (config.kind == ProviderKind::Mock) return std::make_unique<MockProvider>(config.seed);
  return std::make_unique<HttpProvider>(config);
}

}  // namespace catalyst
