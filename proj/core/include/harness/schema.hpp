// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace harness {

enum class SchemaRole { input, output };

/// A JSON Schema document owned by one skill. The registry key is
/// "<skill>/<role>", so identically titled schemas in two folders never
/// collide.
struct SchemaDoc {
    nlohmann::json raw = nlohmann::json::object();
    std::string skill_name;
    SchemaRole role = SchemaRole::input;

    std::string key() const;
};

/// One validation failure, shaped like the {"detail":[...]} wire entries.
struct ValidationErrors {
    struct Item {
        nlohmann::json loc = nlohmann::json::array();
        std::string msg;
        std::string type;
    };
    std::vector<Item> detail;

    bool empty() const { return detail.empty(); }
    nlohmann::json to_json() const;  // {"detail": [...]}
};

struct ValidationOutcome {
    nlohmann::json value;      // body with schema defaults applied
    ValidationErrors errors;   // non-empty on failure

    bool ok() const { return errors.empty(); }
};

/// Validates a parsed body against the skill input schema, applying
/// property defaults. Reports every violation, not just the first.
ValidationOutcome validate_input(const SchemaDoc& schema, const nlohmann::json& body);

/// Same check against an arbitrary schema node (used for output schemas
/// and defaults files).
ValidationOutcome validate_against(const nlohmann::json& schema, const nlohmann::json& body);

/// Canonical byte form: UTF-8, keys sorted at every depth, no
/// insignificant whitespace, numbers in shortest round-trip form. Equal
/// bytes iff structurally identical documents.
std::string canonicalize(const nlohmann::json& value);

/// Renders a chunk the way the JSON fallback and MCP join do: raw string
/// value for JSON strings, canonical JSON text otherwise.
std::string chunk_to_string(const nlohmann::json& chunk);

/// Returns a description of the first construct outside the supported
/// schema subset (unions of complex types, type arrays), or nullopt when
/// the schema is accepted.
std::optional<std::string> schema_subset_error(const nlohmann::json& schema);

}  // namespace harness
