#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>

#include <json.hpp>

#include "vocabx/ensemble.hpp"
#include "vocabx/session.hpp"

namespace vocabx {

/// In-memory sessions keyed by id. With a snapshot directory configured,
/// every mutation is written to "<dir>/<id>.json" and synced before the
/// mutation becomes visible or is acknowledged.
class SessionStore {
 public:
  SessionStore(std::shared_ptr<const ModelRegistry> registry,
               std::optional<std::filesystem::path> snapshot_dir);

  /// Loads every snapshot in the directory. Returns how many were loaded.
  std::size_t load_persisted();

  /// Stores a new session and returns its full view.
  nlohmann::json insert(Session session);

  /// Full view of a session. Throws Error(kSessionNotFound).
  nlohmann::json view(const std::string& id) const;

  /// Applies `op` to a copy of the session under its lock, persists the
  /// copy, then publishes it. Returns the new full view.
  nlohmann::json mutate(const std::string& id, const std::function<void(Session&)>& op);

  /// Runs `op` on the current state under the session lock.
  void read(const std::string& id, const std::function<void(const Session&)>& op) const;

  const ModelRegistry& registry() const { return *registry_; }
  std::size_t size() const;

 private:
  struct Slot {
    mutable std::mutex mutex;
    Session session;
    explicit Slot(Session s) : session(std::move(s)) {}
  };

  std::shared_ptr<Slot> slot(const std::string& id) const;
  void persist(const Session& session) const;

  std::shared_ptr<const ModelRegistry> registry_;
  std::optional<std::filesystem::path> snapshot_dir_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> snapshot_dir;
  std::optional<std::filesystem::path> static_dir;
  SessionParams default_params;  // model_ids empty means "all loaded models"
};

/// HTTP/JSON front end over a SessionStore.
class Service {
 public:
  Service(std::shared_ptr<const ModelRegistry> registry, ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listener and returns the bound port. Throws Error(kIo) on failure.
  int bind();
  /// Serves on the bound socket until stop(); blocks.
  void listen();
  /// bind() then listen() on a background thread.
  int start();
  void stop();

  int port() const noexcept { return port_; }
  SessionStore& store() noexcept { return store_; }

 private:
  struct Impl;
  ServiceConfig config_;
  SessionStore store_;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace vocabx
