// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "harness/skill.hpp"

namespace harness {

/// MCP-facing projection of a skill.
struct ToolDescriptor {
    std::string name;
    std::string description;
    nlohmann::json input_schema;
};

/// Requires skill.meta.is_mcp; throws std::logic_error otherwise.
ToolDescriptor tool_descriptor(const Skill& skill);

struct ServerMeta {
    std::string title = "harness";
    std::string version = "0.1.0";
};

/// OpenAPI 3.1 document covering /skills plus one POST path per skill.
/// The requestBody schema is the skill input schema verbatim, so its
/// canonical bytes match the MCP inputSchema by construction.
nlohmann::json build_openapi(const std::vector<std::shared_ptr<Skill>>& skills,
                             const ServerMeta& meta);

}  // namespace harness
