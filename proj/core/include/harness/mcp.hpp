// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "harness/runtime.hpp"
#include "harness/skill.hpp"

namespace harness::mcp {

// JSON-RPC 2.0 error codes
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;

struct Context {
    const std::vector<std::shared_ptr<Skill>>* skills = nullptr;
    const HandlerRegistry* registry = nullptr;
    std::string server_name = "harness";
    std::string server_version = "0.1.0";
};

/// Capabilities handshake; echoes the client's protocolVersion.
nlohmann::json initialize(const Context& ctx, const nlohmann::json& params);

/// {"tools": [...]}: exactly the skills with is_mcp=true, sorted by name.
nlohmann::json tools_list(const Context& ctx);

/// Runs one tool. Validation failures and handler errors come back as
/// isError results; an unknown tool is the caller's -32602.
nlohmann::json tools_call(const Context& ctx, const Skill& skill,
                          const nlohmann::json& arguments);

/// Full JSON-RPC dispatch over one POST body. Returns nullopt for
/// notifications (no id), which get no response body.
std::optional<nlohmann::json> handle_jsonrpc(const Context& ctx, const std::string& body);

}  // namespace harness::mcp
