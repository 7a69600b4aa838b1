#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "catalyst/engine.hpp"
#include "catalyst/llm.hpp"

namespace httplib {
class Server;
}

namespace catalyst {

std::string_view version() noexcept;

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path data_dir = "data";
  std::size_t summary_target_words = 200;
  std::size_t questions_per_group = 5;
  ProviderConfig provider;
  std::size_t max_upload_bytes = 10'485'760;
  bool export_include_summary = true;
  PageSize page_size = PageSize::A4;
  std::size_t max_sessions = 10'000;
  std::optional<std::filesystem::path> static_dir;

  // Throws InvalidConfig.
  void validate() const;

  // Defaults overridden by CC_BIND (host:port), CC_DATA_DIR,
  // CC_SUMMARY_WORDS, CC_QUESTIONS_PER_GROUP, CC_MAX_UPLOAD_BYTES,
  // CC_EXPORT_INCLUDE_SUMMARY, CC_PAGE_SIZE, CC_MAX_SESSIONS, CC_STATIC_DIR
  // and the CC_LLM_* provider variables.
  static ServiceConfig from_env();
};

// Splits "host:port"; throws InvalidConfig.
std::pair<std::string, int> parse_bind_address(std::string_view s);

struct ServiceHooks {
  Clock clock = system_now;         // session timestamps
  Clock export_clock = system_now;  // export generated_at
  std::function<void(std::chrono::milliseconds)> retry_sleep;
};

// The HTTP API over an Engine. Construction loads any snapshots already in
// data_dir; bind() claims the socket; run() serves until stop().
class Service {
 public:
  explicit Service(ServiceConfig config, ServiceHooks hooks = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Throws BindFailure. Returns the bound port.
  int bind();
  // Blocks until stop(); flushes every session snapshot before returning.
  void run();
  void stop();

  int port() const noexcept { return port_; }
  std::size_t restored_sessions() const noexcept { return restored_; }
  Engine& engine() noexcept { return *engine_; }
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  void install_routes();

  ServiceConfig config_;
  std::unique_ptr<SessionStore> store_;
  std::unique_ptr<Engine> engine_;
  std::unique_ptr<httplib::Server> server_;
  std::chrono::steady_clock::time_point started_;
  std::size_t restored_ = 0;
  int port_ = 0;
};

}  // namespace catalyst
