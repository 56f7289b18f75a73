#include "panoptica/gateway.hpp"

#include <httplib.h>

#include <cstdlib>
#include <random>

#include "panoptica/ingest.hpp"
#include "panoptica/reports.hpp"

namespace panoptica {

DataPaths data_paths(const std::filesystem::path& dir) {
  return {dir / "vocabulary.json", dir / "store.json"};
}

std::filesystem::path default_data_dir() {
  const char* dir = std::getenv(kDataDirVariable);
  return dir && *dir ? std::filesystem::path(dir) : std::filesystem::path(".");
}

// ---------------------------------------------------------------------------
// Engine

Engine::Engine(std::shared_ptr<const Vocabulary> vocab, Store store,
               std::optional<std::filesystem::path> store_file)
    : vocab_(std::move(vocab)),
      store_file_(std::move(store_file)),
      current_(std::make_shared<const Store>(std::move(store))) {}

std::shared_ptr<Engine> Engine::open(const DataPaths& paths) {
  auto vocab = std::make_shared<const Vocabulary>(load_vocabulary(paths.vocabulary));
  Store store = std::filesystem::exists(paths.store) ? load_snapshot(vocab, paths.store)
                                                     : Store(vocab);
  return std::make_shared<Engine>(vocab, std::move(store), paths.store);
}

std::shared_ptr<const Store> Engine::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

void Engine::install(std::shared_ptr<Store> next) {
  if (store_file_) save_snapshot(*next, *store_file_);
  std::lock_guard lock(snapshot_mutex_);
  current_ = std::move(next);
}

// ---------------------------------------------------------------------------
// Sessions

std::string new_session_token() {
  static thread_local std::random_device device;
  static const char* hex = "0123456789abcdef";
  std::string token;
  for (int i = 0; i < 4; ++i) {
    std::uint32_t word = device();
    for (int b = 0; b < 4; ++b) {
      const unsigned byte = word & 0xFFu;
      word >>= 8;
      token.push_back(hex[byte >> 4]);
      token.push_back(hex[byte & 0xFu]);
    }
  }
  return token;
}

std::string SessionTable::create(Clock::time_point now) {
  std::lock_guard lock(mutex_);
  expire(now);
  std::string token;
  do {
    token = new_session_token();
  } while (sessions_.count(token));
  auto entry = std::make_shared<Entry>();
  entry->last_used = now;
  sessions_.emplace(token, std::move(entry));
  return token;
}

std::shared_ptr<SessionTable::Entry> SessionTable::find(const std::string& token,
                                                        Clock::time_point now) {
  std::lock_guard lock(mutex_);
  expire(now);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + token + "'");
  it->second->last_used = now;
  return it->second;
}

std::size_t SessionTable::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void SessionTable::expire(Clock::time_point now) {
  std::erase_if(sessions_, [&](const auto& entry) {
    return now - entry.second->last_used > idle_limit_;
  });
}

// ---------------------------------------------------------------------------
// HTTP

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownObject:
    case ErrorCode::UnknownClass:
    case ErrorCode::UnknownSession:
      return 404;
    case ErrorCode::DuplicateKey:
    case ErrorCode::HasIncomingLinks:
    case ErrorCode::RequiredLinkWouldDangle:
      return 409;
    case ErrorCode::ParseError:
      return 400;
    case ErrorCode::IoError:
    case ErrorCode::CorruptStore:
      return 500;
    default:
      return 422;
  }
}

namespace {

using httplib::Request;
using httplib::Response;

void send_json(Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(Response& res, ErrorCode code, const std::string& message) {
  Json body;
  body["code"] = std::string(to_string(code));
  body["message"] = message;
  send_json(res, body, http_status(code));
}

Json parse_body(const Request& req) {
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::ParseError, "request body must be a JSON object");
  }
  return body;
}

ObjectId path_id(const Request& req, std::size_t group = 1) {
  try {
    return ObjectId{std::stoull(req.matches[static_cast<int>(group)].str())};
  } catch (const std::exception&) {
    throw Error(ErrorCode::UnknownObject, "no object '" + req.matches[1].str() + "'");
  }
}

std::size_t limit_param(const Request& req, std::size_t fallback) {
  if (!req.has_param("limit")) return fallback;
  const std::string raw = req.get_param_value("limit");
  auto v = parse_value(Kind::integer, raw);
  if (!v || std::get<std::int64_t>(*v) < 0) {
    throw Error(ErrorCode::ParseError, "limit must be a non-negative integer");
  }
  return static_cast<std::size_t>(std::get<std::int64_t>(*v));
}

Format format_param(const Request& req, Format fallback) {
  if (!req.has_param("format")) return fallback;
  const std::string raw = req.get_param_value("format");
  auto f = format_from_string(raw);
  if (!f) throw Error(ErrorCode::UnsupportedFormat, "unknown format '" + raw + "'");
  return *f;
}

std::string content_type(Format f) {
  switch (f) {
    case Format::csv: return "text/csv; charset=utf-8";
    case Format::html: return "text/html; charset=utf-8";
    case Format::xml: return "application/xml";
    case Format::sql: return "application/sql";
    case Format::txt: break;
  }
  return "text/plain; charset=utf-8";
}

Values values_from_body(const ClassDef& cls, const Json& values) {
  if (!values.is_object()) throw Error(ErrorCode::ParseError, "'values' must be an object");
  Values out;
  for (const auto& [name, raw] : values.items()) {
    const AttributeDef* attr = cls.find(name);
    if (!attr) {
      throw Error(ErrorCode::UnknownAttribute, "class '" + cls.name + "' has no attribute '" + name + "'");
    }
    if (raw.is_null()) continue;
    auto v = value_from_json(attr->kind, raw);
    if (!v) {
      throw Error(ErrorCode::KindMismatch, "'" + name + "' expects a " + std::string(to_string(attr->kind)));
    }
    out.emplace(name, std::move(*v));
  }
  return out;
}

Patch patch_from_body(const ClassDef& cls, const Json& values) {
  if (!values.is_object()) throw Error(ErrorCode::ParseError, "'values' must be an object");
  Patch out;
  for (const auto& [name, raw] : values.items()) {
    const AttributeDef* attr = cls.find(name);
    if (!attr) {
      throw Error(ErrorCode::UnknownAttribute, "class '" + cls.name + "' has no attribute '" + name + "'");
    }
    if (raw.is_null()) {
      out.emplace(name, std::nullopt);
      continue;
    }
    auto v = value_from_json(attr->kind, raw);
    if (!v) {
      throw Error(ErrorCode::KindMismatch, "'" + name + "' expects a " + std::string(to_string(attr->kind)));
    }
    out.emplace(name, std::move(*v));
  }
  return out;
}

std::string body_source(const Json& body) {
  const auto it = body.find("source");
  if (it == body.end() || !it->is_string()) {
    throw Error(ErrorCode::ParseError, "'source' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

struct Gateway::Impl {
  httplib::Server server;
};

Gateway::Gateway(std::shared_ptr<Engine> engine, GatewayOptions options)
    : engine_(std::move(engine)),
      options_(options),
      sessions_(std::chrono::duration_cast<SessionTable::Clock::duration>(options.session_idle)),
      impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  // Every handler runs inside this wrapper so domain errors become
  // {code, message} bodies.
  auto route = [](auto handler) {
    return [handler](const Request& req, Response& res) {
      try {
        handler(req, res);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      } catch (const Json::exception& e) {
        send_error(res, ErrorCode::ParseError, e.what());
      }
    };
  };

  // Runs `fn(store, session)` against the caller's session when a token is
  // given, else against a throwaway one.
  auto with_session = [this](const Request& req, auto fn) {
    auto store = engine_->snapshot();
    if (!req.has_param("session")) {
      Session scratch;
      return fn(*store, scratch);
    }
    auto entry = sessions_.find(req.get_param_value("session"));
    std::lock_guard lock(entry->mutex);
    prune(*store, entry->session);
    return fn(*store, entry->session);
  };

  auto session_entry = [this](const Request& req) {
    return sessions_.find(req.matches[1].str());
  };

  srv.Get("/classes", route([with_session](const Request& req, Response& res) {
    with_session(req, [&](const Store& store, Session& session) {
      Json body;
      body["d1"] = to_json(build_view(store, session))["d1"];
      send_json(res, body);
    });
  }));

  srv.Get(R"(/classes/([^/]+)/objects)", route([this, with_session](const Request& req, Response& res) {
    const std::size_t limit = limit_param(req, options_.default_limit);
    with_session(req, [&](const Store& store, Session& session) {
      const auto objects = select_class(store, session, req.matches[1].str());
      Json list = Json::array();
      for (std::size_t i = 0; i < objects.size() && i < limit; ++i) list.push_back(to_json(objects[i]));
      Json body;
      body["class"] = req.matches[1].str();
      body["total"] = objects.size();
      body["d2"] = std::move(list);
      send_json(res, body);
    });
  }));

  srv.Post("/objects", route([this](const Request& req, Response& res) {
    const Json body = parse_body(req);
    const std::string cls = body.at("class").get<std::string>();
    const Values values =
        values_from_body(engine_->vocabulary().at(cls), body.value("values", Json::object()));
    const Json created = engine_->write([&](Store& store) {
      const ObjectId id = store.insert(cls, values);
      return to_json(store.get(id), store.vocabulary());
    });
    send_json(res, created, 201);
  }));

  srv.Patch(R"(/objects/(\d+))", route([this](const Request& req, Response& res) {
    const ObjectId id = path_id(req);
    const Json body = parse_body(req);
    const Json updated = engine_->write([&](Store& store) {
      const Patch patch = patch_from_body(store.class_of(id), body.value("values", Json::object()));
      store.update(id, patch);
      return to_json(store.get(id), store.vocabulary());
    });
    send_json(res, updated);
  }));

  srv.Delete(R"(/objects/(\d+))", route([this](const Request& req, Response& res) {
    const ObjectId id = path_id(req);
    bool detach = false;
    if (req.has_param("detach")) {
      auto v = parse_value(Kind::boolean, req.get_param_value("detach"));
      if (!v) throw Error(ErrorCode::ParseError, "detach must be a boolean");
      detach = std::get<bool>(*v);
    }
    engine_->write([&](Store& store) { store.remove(id, detach); });
    Json body;
    body["deleted"] = id.value;
    send_json(res, body);
  }));

  srv.Get(R"(/objects/(\d+))", route([this](const Request& req, Response& res) {
    auto store = engine_->snapshot();
    send_json(res, to_json(store->get(path_id(req)), store->vocabulary()));
  }));

  srv.Get(R"(/objects/(\d+)/view)", route([with_session](const Request& req, Response& res) {
    const ObjectId id = path_id(req);
    with_session(req, [&](const Store& store, Session& session) {
      send_json(res, to_json(focus(store, session, id)));
    });
  }));

  srv.Post("/sessions", route([this](const Request&, Response& res) {
    Json body;
    body["token"] = sessions_.create();
    send_json(res, body, 201);
  }));

  srv.Get(R"(/sessions/([0-9a-f]+))", route([this, session_entry](const Request& req, Response& res) {
    auto entry = session_entry(req);
    auto store = engine_->snapshot();
    std::lock_guard lock(entry->mutex);
    prune(*store, entry->session);
    send_json(res, to_json(entry->session));
  }));

  srv.Get(R"(/sessions/([0-9a-f]+)/view)", route([this, session_entry](const Request& req, Response& res) {
    auto entry = session_entry(req);
    auto store = engine_->snapshot();
    std::lock_guard lock(entry->mutex);
    prune(*store, entry->session);
    send_json(res, to_json(build_view(*store, entry->session)));
  }));

  srv.Post(R"(/sessions/([0-9a-f]+)/follow)", route([this, session_entry](const Request& req, Response& res) {
    const Json body = parse_body(req);
    auto entry = session_entry(req);
    auto store = engine_->snapshot();
    std::lock_guard lock(entry->mutex);
    prune(*store, entry->session);
    const ObjectId from{body.at("from").get<std::uint64_t>()};
    ViewModel view = body.contains("member")
                         ? follow(*store, entry->session, from, ObjectId{body.at("member").get<std::uint64_t>()})
                         : follow(*store, entry->session, from, body.at("attribute").get<std::string>());
    send_json(res, to_json(view));
  }));

  srv.Put(R"(/sessions/([0-9a-f]+)/filter)", route([this, session_entry](const Request& req, Response& res) {
    const Json body = parse_body(req);
    auto entry = session_entry(req);
    auto store = engine_->snapshot();
    std::lock_guard lock(entry->mutex);
    set_filter(*store, entry->session, filter_from_json(store->vocabulary(), body));
    send_json(res, to_json(entry->session));
  }));

  srv.Delete(R"(/sessions/([0-9a-f]+)/filter/(.+))", route([this, session_entry](const Request& req, Response& res) {
    auto entry = session_entry(req);
    std::lock_guard lock(entry->mutex);
    clear_filter(entry->session, req.matches[2].str());
    send_json(res, to_json(entry->session));
  }));

  srv.Put(R"(/sessions/([0-9a-f]+)/anchor)", route([this, session_entry](const Request& req, Response& res) {
    const Json body = parse_body(req);
    auto entry = session_entry(req);
    auto store = engine_->snapshot();
    std::lock_guard lock(entry->mutex);
    set_anchor(*store, entry->session, body.at("class").get<std::string>(),
               ObjectId{body.at("id").get<std::uint64_t>()});
    send_json(res, to_json(entry->session));
  }));

  srv.Delete(R"(/sessions/([0-9a-f]+)/anchor/(.+))", route([this, session_entry](const Request& req, Response& res) {
    auto entry = session_entry(req);
    std::lock_guard lock(entry->mutex);
    clear_anchor(entry->session, req.matches[2].str());
    send_json(res, to_json(entry->session));
  }));

  srv.Post("/import/inspect", route([this](const Request& req, Response& res) {
    const std::string source = body_source(parse_body(req));
    auto store = engine_->snapshot();
    send_json(res, to_json(inspect(store->vocabulary(), source, store.get())));
  }));

  srv.Post("/import/commit", route([this](const Request& req, Response& res) {
    const Json body = parse_body(req);
    const std::string source = body_source(body);
    const ImportMapping mapping = mapping_from_json(body.at("mapping"));
    const ImportReport report =
        engine_->write([&](Store& store) { return import_delimited(store, mapping, source); });
    send_json(res, to_json(report));
  }));

  srv.Get(R"(/reports/object/(\d+))", route([this](const Request& req, Response& res) {
    const Format format = format_param(req, Format::txt);
    auto store = engine_->snapshot();
    res.set_content(object_report(*store, path_id(req), format), content_type(format));
  }));

  srv.Get("/reports/list", route([this, with_session](const Request& req, Response& res) {
    if (!req.has_param("class")) throw Error(ErrorCode::UnknownClass, "missing 'class' parameter");
    const std::string cls = req.get_param_value("class");
    const Format format = format_param(req, Format::csv);
    std::vector<std::string> columns;
    if (req.has_param("columns")) {
      const std::string raw = req.get_param_value("columns");
      for (std::size_t start = 0; start <= raw.size();) {
        const std::size_t comma = std::min(raw.find(',', start), raw.size());
        if (comma > start) columns.push_back(raw.substr(start, comma - start));
        start = comma + 1;
      }
    }
    with_session(req, [&](const Store& store, Session& session) {
      auto it = session.filters.find(cls);
      const Filter filter = it != session.filters.end() ? it->second : Filter{cls, {}};
      res.set_content(list_report(store, cls, filter, columns, format), content_type(format));
    });
  }));

  srv.Get("/export", route([this](const Request& req, Response& res) {
    const Format format = format_param(req, Format::xml);
    auto store = engine_->snapshot();
    res.set_content(export_store(*store, format), content_type(format));
  }));
}

Gateway::~Gateway() { stop(); }

int Gateway::bind(const std::string& host, int port) {
  auto& srv = impl_->server;
  if (port == 0) {
    const int bound = srv.bind_to_any_port(host);
    if (bound <= 0) throw Error(ErrorCode::BindFailure, "cannot bind " + host);
    return bound;
  }
  if (!srv.bind_to_port(host, port)) {
    throw Error(ErrorCode::BindFailure, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Gateway::run() { impl_->server.listen_after_bind(); }

void Gateway::stop() {
  if (impl_) impl_->server.stop();
}

void Gateway::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace panoptica
