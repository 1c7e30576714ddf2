// SPDX-License-Identifier: Apache-2.0
#include "harness/server.hpp"

#include <httplib.h>

#include "harness/schema.hpp"
#include "harness/sse.hpp"

namespace harness {

using nlohmann::json;

bool is_loopback_host(const std::string& host) {
    return host == "localhost" || host == "::1" || host.rfind("127.", 0) == 0;
}

void enforce_loopback(const ServerConfig& config) {
    if (config.enable_edit_endpoints && !is_loopback_host(config.host)) {
        throw std::runtime_error(
            "edit endpoints accept handler overrides over HTTP and must only be "
            "served on a loopback host; refusing to start on '" +
            config.host + "'");
    }
}

namespace {

void json_response(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(canonicalize(body), "application/json");
}

bool wants_json(const httplib::Request& req) {
    return req.get_header_value("Accept").find("application/json") != std::string::npos;
}

const char kDocsPage[] = R"(<!doctype html>
<html>
<head><title>API docs</title></head>
<body>
<h1>API documentation</h1>
<p>The OpenAPI 3.1 document below drives this page; it is also served at
<a href="/openapi.json">/openapi.json</a>.</p>
<pre id="spec">loading...</pre>
<script>
fetch('/openapi.json')
  .then(function (r) { return r.json(); })
  .then(function (doc) {
    document.getElementById('spec').textContent = JSON.stringify(doc, null, 2);
  });
</script>
</body>
</html>
)";

}  // namespace

HarnessServer::HarnessServer(ServerConfig config, std::vector<std::shared_ptr<Skill>> skills,
                             std::shared_ptr<HandlerRegistry> registry,
                             std::optional<LifecycleHooks> user_hooks)
    : config_(std::move(config)),
      skills_(std::move(skills)),
      registry_(std::move(registry)),
      lifecycle_(LifecycleHooks{[this] { mcp_ready_.store(true); },
                                [this] { mcp_ready_.store(false); }},
                 std::move(user_hooks)),
      http_(std::make_unique<httplib::Server>()) {
    openapi_ = build_openapi(skills_, ServerMeta{config_.title, config_.version});
    mcp_ctx_.skills = &skills_;
    mcp_ctx_.registry = registry_.get();
    mcp_ctx_.server_name = config_.title;
    mcp_ctx_.server_version = config_.version;
    setup_routes();
}

HarnessServer::~HarnessServer() { stop(); }

std::shared_ptr<Skill> HarnessServer::find_skill(const std::string& name) const {
    for (const auto& skill : skills_) {
        if (skill->name == name) return skill;
    }
    return nullptr;
}

void HarnessServer::setup_routes() {
    auto& svr = *http_;

    svr.Get("/skills", [this](const httplib::Request&, httplib::Response& res) {
        json listing = json::array();
        for (const auto& skill : skills_) {
            listing.push_back({{"name", skill->name},
                               {"description", skill->meta.description},
                               {"tags", skill->meta.tags},
                               {"streaming", is_streaming(*skill)},
                               {"is_mcp", skill->meta.is_mcp},
                               {"timeout_secs", skill->meta.timeout_secs}});
        }
        json_response(res, 200, listing);
    });

    svr.Get("/openapi.json", [this](const httplib::Request&, httplib::Response& res) {
        json_response(res, 200, openapi_);
    });

    svr.Get("/docs", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kDocsPage, "text/html");
    });

    if (config_.enable_edit_endpoints) {
        svr.Post(R"(/skills/([a-z0-9_-]+)/edit)",
                 [this](const httplib::Request& req, httplib::Response& res) {
                     auto skill = find_skill(req.matches[1]);
                     if (!skill) {
                         json_response(res, 404, {{"detail", "skill not found"}});
                         return;
                     }
                     json body = json::parse(req.body, nullptr, false);
                     if (body.is_discarded() || !body.is_object()) {
                         json_response(res, 422, {{"detail", "override must be a JSON object"}});
                         return;
                     }
                     if (body.value("clear", false)) {
                         clear_edit_override(*skill);
                         json_response(res, 200, {{"status", "ok"}});
                         return;
                     }
                     auto err = apply_edit_override(*skill, body, *registry_);
                     if (!err) {
                         json_response(res, 200, {{"status", "ok"}});
                         return;
                     }
                     const int status = err->kind == EditError::Kind::not_found ? 404 : 422;
                     json_response(res, status, {{"detail", err->message}});
                 });
    }

    svr.Post(R"(/skills/([a-z0-9_-]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
                 auto skill = find_skill(req.matches[1]);
                 if (!skill) {
                     json_response(res, 404, {{"detail", "skill not found"}});
                     return;
                 }
                 json body = json::parse(req.body, nullptr, false);
                 if (body.is_discarded()) {
                     json_response(res, 400, {{"detail", "invalid JSON body"}});
                     return;
                 }
                 // validation precedes the transport branch: 422 is always JSON
                 auto validated = validate_input(skill->input_schema, body);
                 if (!validated.ok()) {
                     json_response(res, 422, validated.errors.to_json());
                     return;
                 }
                 const HandlerBinding binding = skill->effective_binding();
                 const double timeout = skill->meta.timeout_secs;

                 if (wants_json(req)) {
                     if (is_streaming(*skill)) {
                         ChunkStream stream = invoke_streaming(*registry_, binding,
                                                               validated.value, timeout);
                         json chunks = json::array();
                         json chunk;
                         while (stream.next(chunk)) chunks.push_back(chunk_to_string(chunk));
                         if (stream.error()) {
                             const auto& err = *stream.error();
                             if (err.kind == HandlerError::Kind::timeout) {
                                 json_response(res, 504, {{"detail", err.message}});
                             } else {
                                 json_response(res, 500,
                                               {{"detail", err.message},
                                                {"partial_chunks", chunks}});
                             }
                             return;
                         }
                         json_response(res, 200, {{"chunks", chunks}});
                         return;
                     }
                     UnaryOutcome outcome = invoke_unary(*registry_, binding, validated.value,
                                                         timeout, &skill->output_schema);
                     if (auto* err = std::get_if<HandlerError>(&outcome)) {
                         const int status =
                             err->kind == HandlerError::Kind::timeout ? 504 : 500;
                         json_response(res, status, {{"detail", err->message}});
                         return;
                     }
                     json_response(res, 200, std::get<json>(outcome));
                     return;
                 }

                 // SSE: events are flushed as generated, never buffered
                 res.set_header("Cache-Control", "no-cache");
                 res.set_header("Connection", "keep-alive");
                 struct SseState {
                     std::shared_ptr<Skill> skill;
                     json input;
                     const HandlerRegistry* registry;
                     HandlerBinding binding;
                     double timeout;
                     std::optional<ChunkStream> stream;
                     bool finished = false;
                 };
                 auto state = std::make_shared<SseState>();
                 state->skill = skill;
                 state->input = validated.value;
                 state->registry = registry_.get();
                 state->binding = binding;
                 state->timeout = timeout;

                 res.set_chunked_content_provider(
                     "text/event-stream",
                     [state](size_t, httplib::DataSink& sink) {
                         if (state->finished) {
                             sink.done();
                             return true;
                         }
                         if (!is_streaming(*state->skill)) {
                             UnaryOutcome outcome = invoke_unary(
                                 *state->registry, state->binding, state->input,
                                 state->timeout, &state->skill->output_schema);
                             std::string payload;
                             if (auto* err = std::get_if<HandlerError>(&outcome)) {
                                 payload = encode_sse_event(
                                     {SseEvent::Type::error, {{"detail", err->message}}});
                             } else {
                                 payload = encode_sse_event(
                                     {SseEvent::Type::result, std::get<json>(outcome)});
                                 payload += encode_sse_event({SseEvent::Type::done, nullptr});
                             }
                             state->finished = true;
                             sink.write(payload.data(), payload.size());
                             sink.done();
                             return true;
                         }
                         if (!state->stream) {
                             state->stream = invoke_streaming(*state->registry, state->binding,
                                                              state->input, state->timeout);
                         }
                         json chunk;
                         if (state->stream->next(chunk)) {
                             std::string payload =
                                 encode_sse_event({SseEvent::Type::chunk, chunk});
                             return sink.write(payload.data(), payload.size());
                         }
                         std::string payload;
                         if (state->stream->error()) {
                             payload = encode_sse_event(
                                 {SseEvent::Type::error,
                                  {{"detail", state->stream->error()->message}}});
                         } else {
                             payload = encode_sse_event({SseEvent::Type::done, nullptr});
                         }
                         state->finished = true;
                         sink.write(payload.data(), payload.size());
                         sink.done();
                         return true;
                     });
             });

    svr.Post(config_.mcp_path, [this](const httplib::Request& req, httplib::Response& res) {
        auto response = mcp::handle_jsonrpc(mcp_ctx_, req.body);
        if (response) {
            json_response(res, 200, *response);
        } else {
            res.status = 202;  // notification accepted, no body
        }
    });
}

bool HarnessServer::listen() {
    enforce_loopback(config_);
    lifecycle_.start();
    const bool ok = http_->listen(config_.host, config_.port);
    lifecycle_.stop();
    return ok;
}

int HarnessServer::start_background() {
    enforce_loopback(config_);
    lifecycle_.start();
    const int port = http_->bind_to_any_port(config_.host);
    if (port <= 0) {
        lifecycle_.stop();
        throw std::runtime_error("failed to bind " + config_.host);
    }
    serve_thread_ = std::thread([this] { http_->listen_after_bind(); });
    http_->wait_until_ready();
    return port;
}

void HarnessServer::stop() {
    if (http_ && http_->is_running()) http_->stop();
    if (serve_thread_.joinable()) {
        serve_thread_.join();
        lifecycle_.stop();
    }
}

}  // namespace harness
