#include "vocabx/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "vocabx/error.hpp"
#include "vocabx/snapshot.hpp"

namespace vocabx {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_durably(const fs::path& target, const std::string& data) {
  const fs::path tmp = target.string() + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + tmp.string());
  const bool ok = std::fwrite(data.data(), 1, data.size(), f) == data.size() &&
                  std::fflush(f) == 0 && ::fsync(::fileno(f)) == 0;
  std::fclose(f);
  if (!ok) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename to " + target.string() + ": " + ec.message());
  int dir = ::open(target.parent_path().c_str(), O_RDONLY | O_DIRECTORY);
  if (dir >= 0) {
    ::fsync(dir);
    ::close(dir);
  }
}

bool valid_session_id(const std::string& id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id) {
    const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

SessionStore::SessionStore(std::shared_ptr<const ModelRegistry> registry,
                           std::optional<fs::path> snapshot_dir)
    : registry_(std::move(registry)), snapshot_dir_(std::move(snapshot_dir)) {
  if (snapshot_dir_) {
    std::error_code ec;
    fs::create_directories(*snapshot_dir_, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + snapshot_dir_->string());
  }
}

std::size_t SessionStore::load_persisted() {
  if (!snapshot_dir_) return 0;
  std::size_t loaded = 0;
  std::unique_lock lock(map_mutex_);
  for (const auto& entry : fs::directory_iterator(*snapshot_dir_)) {
    const auto& path = entry.path();
    if (path.extension() != ".json") continue;
    const std::string id = path.stem().string();
    if (!valid_session_id(id)) continue;
    std::ifstream in(path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedPayload, path.string() + ": " + e.what());
    }
    Session s = import_snapshot(snapshot_from_json(j), *registry_, id);
    slots_.insert_or_assign(id, std::make_shared<Slot>(std::move(s)));
    ++loaded;
  }
  return loaded;
}

void SessionStore::persist(const Session& session) const {
  if (!snapshot_dir_) return;
  write_durably(*snapshot_dir_ / (session.id() + ".json"),
                snapshot_to_json(export_snapshot(session)).dump(2) + "\n");
}

std::shared_ptr<SessionStore::Slot> SessionStore::slot(const std::string& id) const {
  std::shared_lock lock(map_mutex_);
  auto it = slots_.find(id);
  if (it == slots_.end()) throw Error(ErrorCode::kSessionNotFound, "no session '" + id + "'");
  return it->second;
}

json SessionStore::insert(Session session) {
  persist(session);
  json view = session_view_json(session);
  const std::string id = session.id();
  std::unique_lock lock(map_mutex_);
  slots_.insert_or_assign(id, std::make_shared<Slot>(std::move(session)));
  return view;
}

json SessionStore::view(const std::string& id) const {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  return session_view_json(s->session);
}

json SessionStore::mutate(const std::string& id, const std::function<void(Session&)>& op) {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  Session next = s->session;
  op(next);
  persist(next);
  s->session = std::move(next);
  return session_view_json(s->session);
}

void SessionStore::read(const std::string& id,
                        const std::function<void(const Session&)>& op) const {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  op(s->session);
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(map_mutex_);
  return slots_.size();
}

// --- HTTP ------------------------------------------------------------------

struct Service::Impl {
  httplib::Server server;
};

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSessionNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kIo: return 500;
    default: return 400;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  send_json(res, status, {{"code", code}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedPayload, std::string("invalid JSON: ") + e.what());
  }
}

std::string term_from_body(const httplib::Request& req) {
  json body = parse_body(req);
  if (!body.is_object() || !body.contains("term") || !body["term"].is_string()) {
    throw Error(ErrorCode::kInvalidTerm, "body must be {\"term\": string}");
  }
  return body["term"].get<std::string>();
}

bool is_json_request(const httplib::Request& req) {
  return req.get_header_value("Content-Type").find("json") != std::string::npos;
}

// Wraps a handler so library errors become {code, message} responses.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), error_code_name(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

Service::Service(std::shared_ptr<const ModelRegistry> registry, ServiceConfig config)
    : config_(std::move(config)),
      store_(registry, config_.snapshot_dir),
      impl_(std::make_unique<Impl>()) {
  if (config_.default_params.model_ids.empty()) {
    config_.default_params.model_ids = registry->ids();
  }
  store_.load_persisted();

  auto& srv = impl_->server;
  SessionStore& store = store_;
  const SessionParams defaults = config_.default_params;

  srv.Get("/api/models", guarded([&store](const httplib::Request&, httplib::Response& res) {
            json out = json::array();
            for (const auto& m : store.registry().models()) {
              out.push_back(
                  {{"id", m->id()}, {"dimension", m->dimension()}, {"vocab_size", m->size()}});
            }
            send_json(res, 200, out);
          }));

  srv.Post("/api/sessions",
           guarded([&store, defaults](const httplib::Request& req, httplib::Response& res) {
             SessionParams params = defaults;
             if (!req.body.empty()) {
               json body = parse_body(req);
               if (!body.is_object()) throw Error(ErrorCode::kInvalidParams, "body must be an object");
               params = params_from_json(body.contains("params") ? body["params"] : body, defaults);
             }
             json view = store.insert(new_session(params, store.registry()));
             send_json(res, 201, {{"session_id", view["session_id"]}, {"state", view}});
           }));

  srv.Get(R"(/api/sessions/([^/]+))",
          guarded([&store](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, store.view(req.matches[1]));
          }));

  srv.Post(R"(/api/sessions/([^/]+)/accept)",
           guarded([&store](const httplib::Request& req, httplib::Response& res) {
             const std::string term = term_from_body(req);
             send_json(res, 200, store.mutate(req.matches[1], [&](Session& s) { s.accept(term); }));
           }));

  srv.Post(R"(/api/sessions/([^/]+)/reject)",
           guarded([&store](const httplib::Request& req, httplib::Response& res) {
             const std::string term = term_from_body(req);
             send_json(res, 200, store.mutate(req.matches[1], [&](Session& s) { s.reject(term); }));
           }));

  srv.Post(R"(/api/sessions/([^/]+)/remove)",
           guarded([&store](const httplib::Request& req, httplib::Response& res) {
             const std::string term = term_from_body(req);
             send_json(res, 200,
                       store.mutate(req.matches[1], [&](Session& s) { s.remove_accepted(term); }));
           }));

  srv.Get(R"(/api/sessions/([^/]+)/export)",
          guarded([&store](const httplib::Request& req, httplib::Response& res) {
            const std::string format =
                req.has_param("format") ? req.get_param_value("format") : "snapshot";
            if (format != "snapshot" && format != "terms") {
              throw Error(ErrorCode::kMalformedPayload, "format must be 'snapshot' or 'terms'");
            }
            store.read(req.matches[1], [&](const Session& s) {
              if (format == "terms") {
                res.status = 200;
                res.set_content(export_term_list(s), "text/plain; charset=utf-8");
              } else {
                send_json(res, 200, snapshot_to_json(export_snapshot(s)));
              }
            });
          }));

  srv.Post(R"(/api/sessions/([^/]+)/import)",
           guarded([&store](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.matches[1];
             if (is_json_request(req)) {
               const SessionSnapshot snap = snapshot_from_json(parse_body(req));
               const ModelRegistry& registry = store.registry();
               send_json(res, 200, store.mutate(id, [&](Session& s) {
                           s = import_snapshot(snap, registry, id);
                         }));
             } else {
               send_json(res, 200,
                         store.mutate(id, [&](Session& s) { accept_term_list(s, req.body); }));
             }
           }));

  if (config_.static_dir) {
    if (!srv.set_mount_point("/", config_.static_dir->string())) {
      throw Error(ErrorCode::kIo, "static directory not found: " + config_.static_dir->string());
    }
  }
}

Service::~Service() { stop(); }

int Service::bind() {
  auto& srv = impl_->server;
  if (config_.port == 0) {
    port_ = srv.bind_to_any_port(config_.host);
  } else {
    port_ = srv.bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (port_ < 0) {
    throw Error(ErrorCode::kIo,
                "cannot listen on " + config_.host + ":" + std::to_string(config_.port));
  }
  return port_;
}

void Service::listen() { impl_->server.listen_after_bind(); }

int Service::start() {
  const int p = bind();
  thread_ = std::thread([this] { listen(); });
  impl_->server.wait_until_ready();
  return p;
}

void Service::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace vocabx
