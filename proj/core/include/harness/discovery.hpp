// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "harness/runtime.hpp"
#include "harness/skill.hpp"

namespace harness {

/// Outcome of inspecting one skill folder. valid iff missing is empty.
struct FolderReport {
    std::filesystem::path path;
    bool valid = false;
    std::vector<std::string> missing;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
};

struct FrontMatterMeta {
    std::optional<std::string> name;
    std::optional<std::string> description;
    std::optional<std::vector<std::string>> tags;
};

/// Parses a leading `---` fenced block of key: value lines (name,
/// description, tags as inline or dash list). Returns nullopt when the
/// document has no front-matter; an unclosed fence is treated as absent
/// with a warning.
std::optional<FrontMatterMeta> parse_front_matter(const std::string& text,
                                                  std::vector<std::string>* warnings = nullptr);

/// skill.toml contents: the [skill] metadata plus artifact extensions
/// (streaming flag, [handler] command).
struct SkillManifest {
    MetadataSource source;  // origin toml
    std::optional<bool> streaming;
    std::optional<std::vector<std::string>> command;
    std::vector<std::string> warnings;
};

/// Throws toml::ParseError (with line/column) on syntax errors. Unknown
/// keys are ignored with a warning.
SkillManifest parse_skill_toml(const std::string& text);

struct DiscoveryResult {
    std::vector<std::shared_ptr<Skill>> skills;   // sorted by name
    std::vector<FolderReport> reports;            // one per inspected folder
    std::map<std::string, SchemaDoc> schemas;     // keyed "<skill>/<role>"
};

/// Walks the immediate subfolders of each skills directory and emits one
/// Skill per valid folder. Invalid folders are skipped, never fatal.
/// Throws std::runtime_error when a directory is missing or two
/// directories contribute the same skill name.
DiscoveryResult discover(const std::vector<std::filesystem::path>& skills_dirs,
                         const HandlerRegistry& registry);
DiscoveryResult discover(const std::filesystem::path& skills_dir,
                         const HandlerRegistry& registry);

/// Inspection only; reports and never throws.
FolderReport validate_folder(const std::filesystem::path& path,
                             const HandlerRegistry& registry);

}  // namespace harness
