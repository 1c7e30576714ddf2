// SPDX-License-Identifier: Apache-2.0
#include "harness/mcp.hpp"

#include "harness/openapi.hpp"
#include "harness/schema.hpp"

namespace harness::mcp {

using nlohmann::json;

namespace {

json error_response(const json& id, int code, const std::string& message) {
    return json{{"jsonrpc", "2.0"},
                {"id", id},
                {"error", {{"code", code}, {"message", message}}}};
}

json result_response(const json& id, json result) {
    return json{{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}};
}

json text_result(const std::string& text, bool is_error) {
    return json{{"content", json::array({{{"type", "text"}, {"text", text}}})},
                {"isError", is_error}};
}

}  // namespace

json initialize(const Context& ctx, const json& params) {
    std::string protocol = "2025-03-26";
    if (params.is_object() && params.contains("protocolVersion") &&
        params["protocolVersion"].is_string()) {
        protocol = params["protocolVersion"].get<std::string>();
    }
    return json{{"protocolVersion", protocol},
                {"capabilities", {{"tools", json::object()}}},
                {"serverInfo",
                 {{"name", ctx.server_name}, {"version", ctx.server_version}}}};
}

json tools_list(const Context& ctx) {
    json tools = json::array();
    if (ctx.skills) {
        for (const auto& skill : *ctx.skills) {  // already sorted by name
            if (!skill->meta.is_mcp) continue;
            ToolDescriptor d = tool_descriptor(*skill);
            tools.push_back({{"name", d.name},
                             {"description", d.description},
                             {"inputSchema", d.input_schema}});
        }
    }
    return json{{"tools", tools}};
}

json tools_call(const Context& ctx, const Skill& skill, const json& arguments) {
    auto validated = validate_input(skill.input_schema, arguments);
    if (!validated.ok()) {
        return text_result("invalid arguments: " + canonicalize(validated.errors.to_json()),
                           true);
    }
    const HandlerBinding binding = skill.effective_binding();
    if (is_streaming(skill)) {
        ChunkStream stream = invoke_streaming(*ctx.registry, binding, validated.value,
                                              skill.meta.timeout_secs);
        std::string joined;
        bool first = true;
        json chunk;
        while (stream.next(chunk)) {
            if (!first) joined += "\n";
            joined += chunk_to_string(chunk);
            first = false;
        }
        if (stream.error()) return text_result(stream.error()->message, true);
        return text_result(joined, false);
    }
    UnaryOutcome outcome = invoke_unary(*ctx.registry, binding, validated.value,
                                        skill.meta.timeout_secs, &skill.output_schema);
    if (auto* err = std::get_if<HandlerError>(&outcome)) {
        return text_result(err->message, true);
    }
    const json& output = std::get<json>(outcome);
    json result = text_result(canonicalize(output), false);
    result["structuredContent"] = output;
    return result;
}

std::optional<json> handle_jsonrpc(const Context& ctx, const std::string& body) {
    json request = json::parse(body, nullptr, false);
    if (request.is_discarded()) {
        return error_response(nullptr, kParseError, "Parse error");
    }
    if (!request.is_object() || !request.contains("method") ||
        !request["method"].is_string() || request.value("jsonrpc", "") != "2.0") {
        json id = request.is_object() ? request.value("id", json()) : json();
        return error_response(id, kInvalidRequest, "Invalid Request");
    }
    const bool is_notification = !request.contains("id") || request["id"].is_null();
    const json id = request.value("id", json());
    const std::string method = request["method"].get<std::string>();
    const json params = request.value("params", json::object());

    auto respond = [&](json response) -> std::optional<json> {
        if (is_notification) return std::nullopt;
        return response;
    };

    if (method == "initialize") {
        return respond(result_response(id, initialize(ctx, params)));
    }
    if (method == "notifications/initialized") {
        return std::nullopt;  // accepted, no body
    }
    if (method == "tools/list") {
        return respond(result_response(id, tools_list(ctx)));
    }
    if (method == "tools/call") {
        if (!params.is_object() || !params.contains("name") || !params["name"].is_string()) {
            return respond(error_response(id, kInvalidParams, "missing tool name"));
        }
        const std::string name = params["name"].get<std::string>();
        const Skill* target = nullptr;
        if (ctx.skills) {
            for (const auto& skill : *ctx.skills) {
                if (skill->name == name && skill->meta.is_mcp) {
                    target = skill.get();
                    break;
                }
            }
        }
        if (!target) {
            return respond(error_response(id, kInvalidParams, "unknown tool '" + name + "'"));
        }
        json arguments = params.value("arguments", json::object());
        return respond(result_response(id, tools_call(ctx, *target, arguments)));
    }
    return respond(error_response(id, kMethodNotFound, "Method not found"));
}

}  // namespace harness::mcp
