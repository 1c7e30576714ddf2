// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "harness/schema.hpp"

namespace harness {

/// Where a metadata fragment came from. Lower rank wins on merge.
enum class MetaOrigin { toml = 1, front_matter = 2, docstring = 3, folder_name = 4 };

std::string to_string(MetaOrigin origin);

struct MetadataSource {
    MetaOrigin origin = MetaOrigin::folder_name;
    std::optional<std::string> description;
    std::optional<std::vector<std::string>> tags;
    std::optional<bool> is_mcp;
    std::optional<double> timeout_secs;
};

struct SkillMetadata {
    std::string description;
    std::vector<std::string> tags;
    bool is_mcp = true;
    double timeout_secs = 30.0;
};

/// Merges metadata fragments; for every field the lowest-rank source that
/// sets it wins, and fields unset everywhere fall back to the defaults
/// baked into SkillMetadata.
///
/// Throws std::invalid_argument when sources is empty, when two sources
/// share an origin, or when the winning timeout is not positive.
SkillMetadata merge_metadata(const std::vector<MetadataSource>& sources);

enum class BindingKind { in_process_unary, in_process_streaming, subprocess };

/// How a skill executes: a key into the in-process handler registry, or a
/// subprocess command speaking the JSON stdin/stdout protocol.
struct HandlerBinding {
    BindingKind kind = BindingKind::in_process_unary;
    std::string registry_key;                  // in_process_* only
    std::vector<std::string> command;          // subprocess only
    bool command_streaming = false;            // manifest `streaming` flag
    std::optional<std::filesystem::path> workdir;
};

bool is_streaming(const HandlerBinding& binding);

struct Example {
    nlohmann::json input;
    nlohmann::json output;
    std::filesystem::path source_file;
};

/// The authoritative skill record. Immutable after discovery except the
/// edit override, which is swapped atomically behind a mutex so readers
/// always see either the old or the new binding.
class Skill {
public:
    std::string name;
    SkillMetadata meta;
    SchemaDoc input_schema;
    SchemaDoc output_schema;
    HandlerBinding binding;
    std::optional<nlohmann::json> defaults;
    std::vector<Example> examples;

    /// Snapshot of the binding requests should use right now: the edit
    /// override when one is installed, the base binding otherwise.
    HandlerBinding effective_binding() const;

    bool has_edit_binding() const;
    void set_edit_binding(HandlerBinding b);
    void clear_edit_binding();

private:
    mutable std::mutex edit_mu_;
    std::shared_ptr<const HandlerBinding> edit_;
};

bool is_streaming(const Skill& skill);

/// Skill folder names are URL path segments: [a-z0-9_-]+.
bool is_valid_skill_name(const std::string& name);

}  // namespace harness
