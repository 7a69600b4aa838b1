#pragma once

#include <gtest/gtest.h>

#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "catalyst/error.hpp"
#include "catalyst/llm.hpp"
#include "catalyst/model.hpp"
#include "catalyst/session.hpp"
#include "catalyst/summary.hpp"

namespace catalyst::testing {

#define EXPECT_CATALYST_ERROR(stmt, expected_code)                                         \
  do {                                                                                     \
    try {                                                                                  \
      stmt;                                                                                \
      ADD_FAILURE() << "expected " << ::catalyst::to_string(expected_code) << " from " #stmt; \
    } catch (const ::catalyst::Error& e_) {                                                \
      EXPECT_EQ(::catalyst::to_string(e_.code()), ::catalyst::to_string(expected_code))    \
          << e_.what();                                                                    \
    }                                                                                      \
  } while (0)

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(CATALYST_FIXTURE_DIR) / name;
}

inline std::string read_binary(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("catalyst-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

inline Timestamp fixed_time(std::int64_t ms = 1'700'000'000'000) { return Timestamp(std::chrono::milliseconds(ms)); }

// Session with an approved typed summary.
inline SessionState approved_session(std::string_view summary = "Design a catapult that launches a marshmallow 2 meters.") {
  SessionState s = make_session(SessionId("s-test"), fixed_time());
  set_summary_text(s, summary);
  approve_summary(s);
  return s;
}

// Small seeded random source for hand-rolled property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return std::bernoulli_distribution(p)(engine_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  std::string word(std::size_t min_len = 1, std::size_t max_len = 9) {
    static const std::string letters = "abcdefghijklmnopqrstuvwxyz";
    std::string w;
    std::size_t n = between(min_len, max_len);
    for (std::size_t i = 0; i < n; ++i) w.push_back(letters[below(letters.size())]);
    return w;
  }

  std::string sentence(std::size_t min_words, std::size_t max_words) {
    std::string s;
    std::size_t n = between(min_words, max_words);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) s.push_back(' ');
      s += word();
    }
    return s;
  }

  // Arbitrary text mixing words, assorted whitespace and a few multi-byte
  // characters.
  std::string messy_text(std::size_t max_tokens) {
    static const std::vector<std::string> spaces = {" ", "  ", "\t", "\n", "\r\n", " \n ", "\f", "\v"};
    static const std::vector<std::string> extras = {"é", "—", "“q”", "5.5", "?", "(", ")", "\\"};
    std::string s;
    std::size_t n = below(max_tokens + 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (chance(0.5)) s += pick(spaces);
      s += chance(0.15) ? pick(extras) : word();
    }
    if (chance(0.3)) s += pick(spaces);
    return s;
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Runs `property` for `cases` seeds derived from `base_seed`; failures name
// the seed so a case can be replayed alone.
inline void for_all_seeds(std::uint64_t base_seed, int cases, const std::function<void(Rng&)>& property) {
  for (int i = 0; i < cases; ++i) {
    std::uint64_t seed = base_seed * 1'000'003ULL + static_cast<std::uint64_t>(i);
    SCOPED_TRACE("seed " + std::to_string(seed));
    Rng rng(seed);
    property(rng);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

// Provider that replays a scripted sequence of outcomes and records prompts.
class ScriptedProvider final : public Provider {
 public:
  struct Step {
    std::string text;
    std::optional<ErrorCode> failure;
    bool retryable = true;
  };

  explicit ScriptedProvider(std::vector<Step> steps) : steps_(steps.begin(), steps.end()) {}

  static Step reply(std::string text) { return Step{std::move(text), std::nullopt, true}; }
  static Step fail(ErrorCode code, bool retryable) { return Step{{}, code, retryable}; }

  std::string id() const override { return "scripted"; }

  CompletionText complete(const PromptRequest& request) override {
    std::lock_guard lock(mu_);
    prompts_.push_back(request.rendered_text);
    if (steps_.empty()) throw ProviderFailure(ErrorCode::ProviderError, "script exhausted", false);
    Step step = steps_.front();
    if (steps_.size() > 1 || !repeat_last_) steps_.pop_front();
    if (step.failure) throw ProviderFailure(*step.failure, "scripted failure", step.retryable);
    return CompletionText{step.text, id(), std::chrono::milliseconds(0)};
  }

  void repeat_last(bool on) { repeat_last_ = on; }
  std::vector<std::string> prompts() const {
    std::lock_guard lock(mu_);
    return prompts_;
  }

 private:
  mutable std::mutex mu_;
  std::deque<Step> steps_;
  std::vector<std::string> prompts_;
  bool repeat_last_ = false;
};

}  // namespace catalyst::testing
