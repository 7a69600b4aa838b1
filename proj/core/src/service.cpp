#include "catalyst/service.hpp"

#include <charconv>
#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "catalyst/snapshot.hpp"

#ifndef CATALYST_VERSION
#define CATALYST_VERSION "0.0.0"
#endif

namespace catalyst {

using nlohmann::json;

std::string_view version() noexcept { return CATALYST_VERSION; }

namespace {

// Multipart framing around the file itself.
constexpr std::size_t kMultipartOverhead = 64 * 1024;

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

std::size_t env_count(const char* name, std::size_t fallback) {
  auto v = env(name);
  if (!v) return fallback;
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || p != v->data() + v->size()) {
    throw Error(ErrorCode::InvalidConfig, std::string(name) + " is not a valid count: '" + *v + "'");
  }
  return out;
}

bool env_flag(const char* name, bool fallback) {
  auto v = env(name);
  if (!v) return fallback;
  if (*v == "1" || *v == "true" || *v == "yes" || *v == "on") return true;
  if (*v == "0" || *v == "false" || *v == "no" || *v == "off") return false;
  throw Error(ErrorCode::InvalidConfig, std::string(name) + " must be a boolean: '" + *v + "'");
}

// --- request helpers -------------------------------------------------------------

json body_json(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
  return j;
}

std::string string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw Error(ErrorCode::BadRequest, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

double number_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) throw Error(ErrorCode::BadRequest, std::string("'") + key + "' must be a number");
  return it->get<double>();
}

std::size_t offset_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw Error(ErrorCode::BadRequest, std::string("'") + key + "' must be a non-negative integer");
  }
  return it->get<std::size_t>();
}

const std::string& param(const httplib::Request& req, const char* name) { return req.path_params.at(name); }

SessionId sid(const httplib::Request& req) { return SessionId(param(req, "sid")); }

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", code}, {"message", message}}.dump(), "application/json");
}

json preview_json(const ExportDocument& doc) {
  json questions = json::array();
  for (const auto& q : doc.questions) questions.push_back({{"index", q.index}, {"text", q.text}});
  return {{"title", doc.title},
          {"summary", doc.summary_text},
          {"questions", questions},
          {"generated_at", format_timestamp(doc.generated_at)}};
}

std::string_view code_for_status(int status) {
  switch (status) {
    case 404: return "not-found";
    case 413: return "payload-too-large";
    case 405: return "method-not-allowed";
    default: return status >= 500 ? "internal" : "bad-request";
  }
}

}  // namespace

std::pair<std::string, int> parse_bind_address(std::string_view s) {
  auto colon = s.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::InvalidConfig, "bind address must be host:port, got '" + std::string(s) + "'");
  }
  std::string_view port_text = s.substr(colon + 1);
  int port = -1;
  auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || p != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::InvalidConfig, "invalid port in bind address '" + std::string(s) + "'");
  }
  std::string host(s.substr(0, colon));
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  return {host, port};
}

void ServiceConfig::validate() const {
  if (summary_target_words == 0) throw Error(ErrorCode::InvalidConfig, "summary_target_words must be positive");
  if (questions_per_group == 0) throw Error(ErrorCode::InvalidConfig, "questions_per_group must be positive");
  if (max_upload_bytes == 0) throw Error(ErrorCode::InvalidConfig, "max_upload_bytes must be positive");
  if (max_sessions == 0) throw Error(ErrorCode::InvalidConfig, "max_sessions must be positive");
  if (port < 0 || port > 65535) throw Error(ErrorCode::InvalidConfig, "port out of range");
  if (data_dir.empty()) throw Error(ErrorCode::InvalidConfig, "data_dir must be set");
  provider.validate();
}

ServiceConfig ServiceConfig::from_env() {
  ServiceConfig cfg;
  if (auto v = env("CC_BIND")) std::tie(cfg.host, cfg.port) = parse_bind_address(*v);
  if (auto v = env("CC_DATA_DIR")) cfg.data_dir = *v;
  cfg.summary_target_words = env_count("CC_SUMMARY_WORDS", cfg.summary_target_words);
  cfg.questions_per_group = env_count("CC_QUESTIONS_PER_GROUP", cfg.questions_per_group);
  cfg.max_upload_bytes = env_count("CC_MAX_UPLOAD_BYTES", cfg.max_upload_bytes);
  cfg.max_sessions = env_count("CC_MAX_SESSIONS", cfg.max_sessions);
  cfg.export_include_summary = env_flag("CC_EXPORT_INCLUDE_SUMMARY", cfg.export_include_summary);
  if (auto v = env("CC_PAGE_SIZE")) cfg.page_size = parse_page_size(*v);
  if (auto v = env("CC_STATIC_DIR")) cfg.static_dir = *v;
  cfg.provider = ProviderConfig::from_env();
  return cfg;
}

Service::Service(ServiceConfig config, ServiceHooks hooks) : config_(std::move(config)) {
  config_.validate();
  StoreOptions store_options;
  store_options.data_dir = config_.data_dir;
  store_options.max_sessions = config_.max_sessions;
  store_options.clock = hooks.clock;
  store_ = std::make_unique<SessionStore>(std::move(store_options));
  restored_ = store_->load_data_dir();

  RetryPolicy policy{config_.provider.max_retries, config_.provider.retry_backoff, 2.0, hooks.retry_sleep};
  EngineOptions engine_options;
  engine_options.summary_target_words = config_.summary_target_words;
  engine_options.questions_per_group = config_.questions_per_group;
  engine_options.export_options.include_summary = config_.export_include_summary;
  engine_options.pdf_options.page_size = config_.page_size;
  engine_options.export_clock = hooks.export_clock;
  engine_ = std::make_unique<Engine>(*store_, LlmGateway(make_provider(config_.provider), policy), engine_options);

  server_ = std::make_unique<httplib::Server>();
  server_->set_payload_max_length(config_.max_upload_bytes + kMultipartOverhead);
  // httplib also sets SO_REUSEPORT, which would let a second instance share
  // the port instead of failing to bind.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  install_routes();
  started_ = std::chrono::steady_clock::now();
}

Service::~Service() = default;

int Service::bind() {
  int port = config_.port;
  if (port == 0) {
    port = server_->bind_to_any_port(config_.host);
  } else if (!server_->bind_to_port(config_.host, port)) {
    port = -1;
  }
  if (port <= 0) {
    throw Error(ErrorCode::BindFailure,
                "cannot bind " + config_.host + ":" + std::to_string(config_.port) + " (address in use or not permitted)");
  }
  port_ = port;
  return port_;
}

void Service::run() {
  server_->listen_after_bind();
  store_->flush_all();
}

void Service::stop() { server_->stop(); }

void Service::install_routes() {
  httplib::Server& srv = *server_;
  Engine& eng = *engine_;

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "bad-request", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    } catch (...) {
      send_error(res, 500, "internal", "unknown failure");
    }
  });
  srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    std::string message = res.status == 413   ? "upload exceeds the configured size limit"
                          : res.status == 404 ? "no route for " + req.method + " " + req.path
                                              : httplib::status_message(res.status);
    send_error(res, res.status, code_for_status(res.status), message);
    return httplib::Server::HandlerResponse::Handled;
  });

  if (config_.static_dir) srv.set_mount_point("/", config_.static_dir->string());

  srv.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    auto uptime = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started_);
    send_json(res, {{"status", "ok"},
                    {"version", version()},
                    {"provider", to_string(config_.provider.kind)},
                    {"uptime_ms", uptime.count()}});
  });

  const std::string base = "/api/v1/sessions";
  const std::string s = base + "/:sid";

  srv.Post(base, [&eng](const httplib::Request&, httplib::Response& res) {
    send_json(res, to_json(eng.create_session()), 201);
  });
  srv.Post(base + "/restore", [&eng](const httplib::Request& req, httplib::Response& res) {
    send_json(res, to_json(eng.restore_snapshot(req.body)), 201);
  });
  srv.Get(s, [&eng](const httplib::Request& req, httplib::Response& res) { send_json(res, to_json(eng.get(sid(req)))); });
  srv.Delete(s, [&eng](const httplib::Request& req, httplib::Response& res) {
    eng.remove_session(sid(req));
    res.status = 204;
  });
  srv.Get(s + "/snapshot", [&eng](const httplib::Request& req, httplib::Response& res) {
    res.set_content(eng.save_snapshot(sid(req)), "application/json");
  });
  srv.Post(s + "/stage", [&eng](const httplib::Request& req, httplib::Response& res) {
    std::string name = string_field(body_json(req), "stage");
    auto stage = parse_stage(name);
    if (!stage) throw Error(ErrorCode::BadRequest, "unknown stage '" + name + "'");
    send_json(res, to_json(eng.set_stage(sid(req), *stage)));
  });

  // Summarize
  srv.Post(s + "/document", [this, &eng](const httplib::Request& req, httplib::Response& res) {
    SessionId id = sid(req);
    if (!eng.store().contains(id)) throw Error(ErrorCode::NotFound, "no session " + id.str());
    if (!req.is_multipart_form_data() || !req.has_file("file")) {
      throw Error(ErrorCode::BadRequest, "expected a multipart form with a 'file' field");
    }
    const httplib::MultipartFormData file = req.get_file_value("file");
    if (file.content.size() > config_.max_upload_bytes) {
      throw Error(ErrorCode::PayloadTooLarge, "'" + file.filename + "' is " + std::to_string(file.content.size()) +
                                                  " bytes; the limit is " + std::to_string(config_.max_upload_bytes));
    }
    IngestResult result = eng.ingest_document(id, make_document(file.filename, file.content));
    send_json(res, {{"summary", to_json(result.summary)},
                    {"extracted_text", result.extracted_text},
                    {"truncated", result.truncated}});
  });
  srv.Put(s + "/summary", [&eng](const httplib::Request& req, httplib::Response& res) {
    json body = body_json(req);
    std::string text = string_field(body, "text");
    SessionId id = sid(req);
    std::string mode = body.contains("mode") ? string_field(body, "mode") : std::string();
    if (mode.empty()) mode = eng.get(id).summary ? "edit" : "typed";
    if (mode == "typed") {
      send_json(res, to_json(eng.set_summary_text(id, text)));
    } else if (mode == "edit") {
      send_json(res, to_json(eng.edit_summary(id, text)));
    } else {
      throw Error(ErrorCode::BadRequest, "mode must be 'typed' or 'edit'");
    }
  });
  srv.Post(s + "/summary/approve", [&eng](const httplib::Request& req, httplib::Response& res) {
    send_json(res, to_json(eng.approve_summary(sid(req))));
  });

  // Conceptualize
  srv.Post(s + "/concepts", [&eng](const httplib::Request& req, httplib::Response& res) {
    json body = body_json(req);
    std::string kind = string_field(body, "kind");
    SessionId id = sid(req);
    Concept c;
    if (kind == "highlight") {
      c = eng.create_highlight_concept(id, offset_field(body, "start"), offset_field(body, "end"));
    } else if (kind == "custom") {
      c = eng.create_custom_concept(id, string_field(body, "label"));
    } else {
      throw Error(ErrorCode::BadRequest, "kind must be 'highlight' or 'custom'");
    }
    send_json(res, to_json(c, eng.get(id)), 201);
  });
  srv.Patch(s + "/concepts/:cid", [&eng](const httplib::Request& req, httplib::Response& res) {
    json body = body_json(req);
    SessionId id = sid(req);
    ConceptId cid(param(req, "cid"));
    Concept c;
    if (body.contains("area")) {
      if (string_field(body, "area") != "waiting") throw Error(ErrorCode::BadRequest, "area must be 'waiting'");
      c = eng.return_to_waiting(id, cid);
    } else {
      c = eng.place_concept(id, cid, number_field(body, "x"), number_field(body, "y"));
    }
    send_json(res, to_json(c, eng.get(id)));
  });
  srv.Delete(s + "/concepts/:cid", [&eng](const httplib::Request& req, httplib::Response& res) {
    SessionId id = sid(req);
    eng.remove_concept(id, ConceptId(param(req, "cid")));
    send_json(res, to_json(eng.get(id)));
  });
  srv.Post(s + "/edges", [&eng](const httplib::Request& req, httplib::Response& res) {
    json body = body_json(req);
    send_json(res, to_json(eng.connect(sid(req), ConceptId(string_field(body, "a")), ConceptId(string_field(body, "b")))),
              201);
  });
  srv.Delete(s + "/edges/:eid", [&eng](const httplib::Request& req, httplib::Response& res) {
    SessionId id = sid(req);
    eng.disconnect(id, EdgeId(param(req, "eid")));
    send_json(res, to_json(eng.get(id)));
  });

  // Synthesize
  srv.Post(s + "/groups", [&eng](const httplib::Request& req, httplib::Response& res) {
    send_json(res, to_json(eng.create_group(sid(req))), 201);
  });
  srv.Post(s + "/groups/:gid/toggle/:cid", [&eng](const httplib::Request& req, httplib::Response& res) {
    send_json(res, to_json(eng.toggle_concept(sid(req), GroupId(param(req, "gid")), ConceptId(param(req, "cid")))));
  });
  srv.Post(s + "/groups/:gid/generate", [&eng](const httplib::Request& req, httplib::Response& res) {
    send_json(res, to_json(eng.generate_questions(sid(req), GroupId(param(req, "gid")))));
  });
  srv.Post(s + "/questions/:qid/review", [&eng](const httplib::Request& req, httplib::Response& res) {
    json body = body_json(req);
    std::string verdict = string_field(body, "verdict");
    Verdict v;
    if (verdict == "accept") {
      v = Accept{};
    } else if (verdict == "reject") {
      v = Reject{};
    } else if (verdict == "modify") {
      v = Modify{string_field(body, "text")};
    } else {
      throw Error(ErrorCode::BadRequest, "verdict must be accept, reject or modify");
    }
    send_json(res, to_json(eng.review(sid(req), QuestionId(param(req, "qid")), v)));
  });
  srv.Get(s + "/bank", [&eng](const httplib::Request& req, httplib::Response& res) {
    json questions = json::array();
    for (const Question& q : eng.bank(sid(req))) questions.push_back(to_json(q));
    send_json(res, {{"questions", questions}});
  });

  // Export
  srv.Get(s + "/export/preview", [&eng](const httplib::Request& req, httplib::Response& res) {
    send_json(res, preview_json(eng.preview(sid(req))));
  });
  srv.Get(s + "/export/txt", [&eng](const httplib::Request& req, httplib::Response& res) {
    res.set_content(eng.export_plaintext(sid(req)), "text/plain; charset=utf-8");
  });
  srv.Get(s + "/export/pdf", [&eng](const httplib::Request& req, httplib::Response& res) {
    res.set_header("Content-Disposition", "inline; filename=\"scaffolding-questions.pdf\"");
    res.set_content(eng.export_pdf(sid(req)), "application/pdf");
  });
}

}  // namespace catalyst
