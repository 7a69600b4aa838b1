#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <type_traits>
#include <vector>

#include "catalyst/error.hpp"
#include "catalyst/model.hpp"

namespace catalyst {

using Clock = std::function<Timestamp()>;

Timestamp system_now();

// Random 128-bit id rendered as 32 lowercase hex digits.
SessionId random_session_id();

struct StoreOptions {
  // When set, every committed write is mirrored to <data_dir>/<id>.json.
  std::optional<std::filesystem::path> data_dir;
  std::size_t max_sessions = 10'000;
  Clock clock = system_now;
  std::function<SessionId()> id_source = random_session_id;
};

// Owns all live sessions. Mutations on one session are serialized by that
// session's mutex; different sessions proceed independently. A mutation runs
// against a copy of the state and is committed (and persisted) only when it
// returns normally, so a throwing operation leaves the session untouched.
class SessionStore {
 public:
  explicit SessionStore(StoreOptions options = {});

  SessionState create();
  SessionState get(const SessionId& id) const;
  bool contains(const SessionId& id) const;
  std::vector<SessionId> ids() const;
  std::size_t size() const;

  // Runs fn(SessionState&) under the session's writer lock and returns its
  // result. updated_at is stamped on commit.
  template <typename Fn>
  auto mutate(const SessionId& id, Fn&& fn) -> std::invoke_result_t<Fn, SessionState&>;

  void remove(const SessionId& id);

  std::string save_snapshot(const SessionId& id) const;
  // Registers the decoded session under its original id.
  SessionState restore_snapshot(std::string_view blob);

  // Restores every snapshot file in data_dir; returns how many were loaded.
  // Unreadable files are skipped and reported through `skipped`.
  std::size_t load_data_dir(std::vector<std::string>* skipped = nullptr);

  // Rewrites every session's snapshot file.
  void flush_all() const;

  const StoreOptions& options() const noexcept { return options_; }

 private:
  struct Entry {
    mutable std::mutex mu;
    SessionState state;
  };

  std::shared_ptr<Entry> find(const SessionId& id) const;
  void persist(const SessionState& state) const;

  StoreOptions options_;
  mutable std::shared_mutex mu_;
  std::map<SessionId, std::shared_ptr<Entry>> sessions_;
  std::set<SessionId> retired_;
};

template <typename Fn>
auto SessionStore::mutate(const SessionId& id, Fn&& fn) -> std::invoke_result_t<Fn, SessionState&> {
  std::shared_ptr<Entry> entry = find(id);
  std::lock_guard lock(entry->mu);
  SessionState working = entry->state;
  auto commit = [&] {
    working.updated_at = options_.clock();
    persist(working);
    entry->state = std::move(working);
  };
  if constexpr (std::is_void_v<std::invoke_result_t<Fn, SessionState&>>) {
    std::forward<Fn>(fn)(working);
    commit();
  } else {
    auto result = std::forward<Fn>(fn)(working);
    commit();
    return result;
  }
}

}  // namespace catalyst
