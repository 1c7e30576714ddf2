// SPDX-License-Identifier: Apache-2.0
#include "harness/openapi.hpp"

#include <stdexcept>

#include "harness/schema.hpp"

namespace harness {

using nlohmann::json;

ToolDescriptor tool_descriptor(const Skill& skill) {
    if (!skill.meta.is_mcp) {
        throw std::logic_error("tool_descriptor called on a skill with is_mcp=false");
    }
    return ToolDescriptor{skill.name, skill.meta.description, skill.input_schema.raw};
}

namespace {

json validation_error_schema() {
    return json{
        {"type", "object"},
        {"properties",
         {{"detail",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"properties",
               {{"loc", {{"type", "array"}}},
                {"msg", {{"type", "string"}}},
                {"type", {{"type", "string"}}}}}}}}}}},
        {"required", json::array({"detail"})}};
}

json chunks_schema() {
    return json{{"type", "object"},
                {"properties",
                 {{"chunks", {{"type", "array"}, {"items", {{"type", "string"}}}}}}},
                {"required", json::array({"chunks"})}};
}

json skill_listing_schema() {
    return json{
        {"type", "array"},
        {"items",
         {{"type", "object"},
          {"properties",
           {{"name", {{"type", "string"}}},
            {"description", {{"type", "string"}}},
            {"tags", {{"type", "array"}, {"items", {{"type", "string"}}}}},
            {"streaming", {{"type", "boolean"}}},
            {"is_mcp", {{"type", "boolean"}}},
            {"timeout_secs", {{"type", "number"}}}}}}}};
}

}  // namespace

json build_openapi(const std::vector<std::shared_ptr<Skill>>& skills,
                   const ServerMeta& meta) {
    json paths = json::object();

    paths["/skills"] = {
        {"get",
         {{"operationId", "list_skills"},
          {"summary", "List discovered skills"},
          {"responses",
           {{"200",
             {{"description", "Skill listing"},
              {"content", {{"application/json", {{"schema", skill_listing_schema()}}}}}}}}}}}};

    for (const auto& skill : skills) {
        json request_content = {{"schema", skill->input_schema.raw}};
        if (skill->defaults) request_content["example"] = *skill->defaults;

        json ok_content = {
            {"text/event-stream", {{"schema", {{"type", "string"}}}}},
            {"application/json",
             {{"schema", is_streaming(*skill) ? chunks_schema() : skill->output_schema.raw}}}};

        json op = {
            {"operationId", skill->name},
            {"description", skill->meta.description},
            {"requestBody",
             {{"required", true}, {"content", {{"application/json", request_content}}}}},
            {"responses",
             {{"200", {{"description", "Skill response"}, {"content", ok_content}}},
              {"422",
               {{"description", "Validation error"},
                {"content",
                 {{"application/json", {{"schema", validation_error_schema()}}}}}}}}}};
        if (!skill->meta.tags.empty()) op["tags"] = skill->meta.tags;
        paths["/skills/" + skill->name] = {{"post", op}};
    }

    return json{{"openapi", "3.1.0"},
                {"info", {{"title", meta.title}, {"version", meta.version}}},
                {"paths", paths}};
}

}  // namespace harness
