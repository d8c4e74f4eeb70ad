#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "json.hpp"
#include "sd/session.hpp"

namespace httplib {
class Server;
}

namespace sd::service {

struct SessionEntry {
  std::mutex mutex;  // serializes requests on one session
  Session session;
  std::chrono::steady_clock::time_point last_used;

  SessionEntry(Dpi dpi, SessionConfig config) : session(std::move(dpi), std::move(config)) {}
};

/// In-memory sessions with idle expiry.
class SessionStore {
 public:
  explicit SessionStore(std::chrono::seconds ttl = std::chrono::hours(1)) : ttl_(ttl) {}

  std::string create(Dpi dpi, SessionConfig config);
  std::shared_ptr<SessionEntry> find(const std::string& id);
  std::size_t size();
  void purge_expired();

 private:
  std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<SessionEntry>> sessions_;
  std::chrono::seconds ttl_;
  std::uint64_t next_id_ = 1;
};

/// Reads a session config object; unknown keys are rejected.
SessionConfig parse_config(const nlohmann::json& j);

nlohmann::json diagnoses_json(const Session& s);
nlohmann::json query_json(const Session& s, const PendingQuery& q);

struct ServiceOptions {
  std::chrono::seconds ttl = std::chrono::hours(1);
  std::optional<std::filesystem::path> static_dir;  // bundled UI
};

/// Routes: POST /sessions, GET /sessions/{id}, GET /sessions/{id}/query,
/// POST /sessions/{id}/answer, GET /sessions/{id}/history.
void install_routes(httplib::Server& server, SessionStore& store, const ServiceOptions& opts = {});

}  // namespace sd::service
