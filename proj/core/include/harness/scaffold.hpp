// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace harness {

struct ScaffoldReport {
    std::vector<std::string> created;
    std::vector<std::string> warnings;
};

/// Writes a fresh project skeleton: harness.toml plus skills/echo with
/// the full optional file set. Throws std::runtime_error when the target
/// is non-empty and force is false.
ScaffoldReport init_project(const std::filesystem::path& target, bool force = false);

/// Copies one external skill folder into skills_dir, writing a stub
/// models.json (with a prominent warning) when the source has none.
ScaffoldReport import_skill(const std::filesystem::path& source,
                            const std::filesystem::path& skills_dir);

/// import_skill for every immediate subfolder of source_dir.
ScaffoldReport import_skills_dir(const std::filesystem::path& source_dir,
                                 const std::filesystem::path& skills_dir);

}  // namespace harness
