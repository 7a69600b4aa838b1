#include "catalyst/session_store.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "catalyst/session.hpp"
#include "catalyst/snapshot.hpp"

namespace catalyst {

namespace fs = std::filesystem;

Timestamp system_now() {
  return std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

SessionId random_session_id() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (int word = 0; word < 2; ++word) {
    std::uint64_t v = rng();
    for (int i = 0; i < 16; ++i) {
      out.push_back(kHex[v & 0xF]);
      v >>= 4;
    }
  }
  return SessionId(out);
}

SessionStore::SessionStore(StoreOptions options) : options_(std::move(options)) {
  if (options_.data_dir) {
    std::error_code ec;
    fs::create_directories(*options_.data_dir, ec);
    if (ec) {
      throw Error(ErrorCode::DataDirUnwritable,
                  "cannot create data directory " + options_.data_dir->string() + ": " + ec.message());
    }
    fs::path probe = *options_.data_dir / ".write-probe";
    std::ofstream out(probe);
    if (!out) throw Error(ErrorCode::DataDirUnwritable, "data directory " + options_.data_dir->string() + " is not writable");
    out.close();
    fs::remove(probe, ec);
  }
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const SessionId& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "session '" + id.str() + "' not found");
  return it->second;
}

void SessionStore::persist(const SessionState& state) const {
  if (!options_.data_dir) return;
  std::string blob = encode_snapshot(state);
  fs::path final_path = *options_.data_dir / (state.id.str() + ".json");
  fs::path tmp_path = final_path;
  tmp_path += ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::SerializationFailure, "cannot write snapshot " + tmp_path.string());
  }
  std::error_code ec;
  fs::rename(tmp_path, final_path, ec);
  if (ec) throw Error(ErrorCode::SerializationFailure, "cannot commit snapshot " + final_path.string() + ": " + ec.message());
}

SessionState SessionStore::create() {
  SessionState state;
  {
    std::unique_lock lock(mu_);
    if (sessions_.size() >= options_.max_sessions) {
      throw Error(ErrorCode::StoreFull, "session store is full (" + std::to_string(options_.max_sessions) + " sessions)");
    }
    SessionId id = options_.id_source();
    while (sessions_.contains(id) || retired_.contains(id)) id = options_.id_source();
    state = make_session(id, options_.clock());
    // Reserve the id before releasing the lock; the entry is filled below.
    sessions_[id] = std::make_shared<Entry>();
    sessions_[id]->state = state;
  }
  try {
    persist(state);
  } catch (...) {
    std::unique_lock lock(mu_);
    sessions_.erase(state.id);
    throw;
  }
  return state;
}

SessionState SessionStore::get(const SessionId& id) const {
  std::shared_ptr<Entry> entry = find(id);
  std::lock_guard lock(entry->mu);
  return entry->state;
}

bool SessionStore::contains(const SessionId& id) const {
  std::shared_lock lock(mu_);
  return sessions_.contains(id);
}

std::vector<SessionId> SessionStore::ids() const {
  std::shared_lock lock(mu_);
  std::vector<SessionId> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

void SessionStore::remove(const SessionId& id) {
  {
    std::unique_lock lock(mu_);
    if (sessions_.erase(id) == 0) throw Error(ErrorCode::NotFound, "session '" + id.str() + "' not found");
    retired_.insert(id);
  }
  if (options_.data_dir) {
    std::error_code ec;
    fs::remove(*options_.data_dir / (id.str() + ".json"), ec);
  }
}

std::string SessionStore::save_snapshot(const SessionId& id) const { return encode_snapshot(get(id)); }

SessionState SessionStore::restore_snapshot(std::string_view blob) {
  SessionState state = decode_snapshot(blob);
  {
    std::unique_lock lock(mu_);
    if (sessions_.contains(state.id)) {
      throw Error(ErrorCode::IdCollision, "session '" + state.id.str() + "' already exists");
    }
    if (sessions_.size() >= options_.max_sessions) {
      throw Error(ErrorCode::StoreFull, "session store is full");
    }
    retired_.erase(state.id);
    auto entry = std::make_shared<Entry>();
    entry->state = state;
    sessions_[state.id] = std::move(entry);
  }
  persist(state);
  return state;
}

std::size_t SessionStore::load_data_dir(std::vector<std::string>* skipped) {
  if (!options_.data_dir) return 0;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(*options_.data_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t loaded = 0;
  for (const fs::path& p : files) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      SessionState state = decode_snapshot(buf.str());
      std::unique_lock lock(mu_);
      if (sessions_.contains(state.id)) throw Error(ErrorCode::IdCollision, "duplicate session id");
      auto e = std::make_shared<Entry>();
      SessionId id = state.id;
      e->state = std::move(state);
      sessions_[id] = std::move(e);
      ++loaded;
    } catch (const Error& e) {
      if (skipped) skipped->push_back(p.filename().string() + ": " + e.what());
    }
  }
  return loaded;
}

void SessionStore::flush_all() const {
  std::vector<std::shared_ptr<Entry>> entries;
  {
    std::shared_lock lock(mu_);
    for (const auto& [_, e] : sessions_) entries.push_back(e);
  }
  for (const auto& e : entries) {
    std::lock_guard lock(e->mu);
    persist(e->state);
  }
}

}  // namespace catalyst
