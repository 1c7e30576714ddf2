// SPDX-License-Identifier: Apache-2.0
#include "harness/scaffold.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace harness {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& content, ScaffoldReport& report) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
    report.created.push_back(p.string());
}

const char kSampleModels[] = R"({
  "input": {
    "type": "object",
    "properties": {"text": {"type": "string"}},
    "required": ["text"]
  },
  "output": {
    "type": "object",
    "properties": {"text": {"type": "string"}},
    "required": ["text"]
  }
}
)";

const char kSampleToml[] = R"([skill]
description = "Echo the input back unchanged"
tags = ["sample"]
timeout_secs = 30

[handler]
command = ["cat"]
)";

const char kSampleSkillMd[] = R"(---
name: echo
description: Echo the input back unchanged
tags: [sample]
---
# echo

Identity skill: the response body equals the request body.
)";

const char kStubModels[] =
    "{\"input\":{\"type\":\"object\"},\"output\":{\"type\":\"object\"}}\n";

}  // namespace

ScaffoldReport init_project(const fs::path& target, bool force) {
    if (fs::exists(target) && !fs::is_directory(target)) {
        throw std::runtime_error(target.string() + " exists and is not a directory");
    }
    if (fs::is_directory(target) && !fs::is_empty(target) && !force) {
        throw std::runtime_error(target.string() +
                                 " is not empty; pass --force to scaffold anyway");
    }
    ScaffoldReport report;
    fs::create_directories(target);
    write_file(target / "harness.toml",
               "[server]\n"
               "host = \"127.0.0.1\"\n"
               "port = 8000\n"
               "skills_dir = \"skills\"\n"
               "mcp_path = \"/mcp\"\n",
               report);
    const fs::path echo = target / "skills" / "echo";
    write_file(echo / "models.json", kSampleModels, report);
    write_file(echo / "skill.toml", kSampleToml, report);
    write_file(echo / "SKILL.md", kSampleSkillMd, report);
    write_file(echo / "defaults" / "input.json", "{\"text\": \"hello\"}\n", report);
    write_file(echo / "examples" / "01.json",
               "{\"input\": {\"text\": \"hello\"}, \"output\": {\"text\": \"hello\"}}\n",
               report);
    return report;
}

ScaffoldReport import_skill(const fs::path& source, const fs::path& skills_dir) {
    if (!fs::is_directory(source)) {
        throw std::runtime_error("skill source is not a directory: " + source.string());
    }
    ScaffoldReport report;
    const fs::path dest = skills_dir / source.filename();
    fs::create_directories(dest);
    fs::copy(source, dest,
             fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    report.created.push_back(dest.string());
    if (!fs::exists(dest / "models.json")) {
        std::ofstream out(dest / "models.json", std::ios::binary);
        out << kStubModels;
        report.warnings.push_back("WARNING: " + source.filename().string() +
                                  " has no models.json; wrote a permissive stub "
                                  "({\"type\":\"object\"}) - tighten it before deploying");
    }
    return report;
}

ScaffoldReport import_skills_dir(const fs::path& source_dir, const fs::path& skills_dir) {
    if (!fs::is_directory(source_dir)) {
        throw std::runtime_error("skills source is not a directory: " + source_dir.string());
    }
    ScaffoldReport report;
    std::vector<fs::path> folders;
    for (const auto& e : fs::directory_iterator(source_dir)) {
        if (e.is_directory()) folders.push_back(e.path());
    }
    std::sort(folders.begin(), folders.end());
    for (const auto& folder : folders) {
        ScaffoldReport one = import_skill(folder, skills_dir);
        report.created.insert(report.created.end(), one.created.begin(), one.created.end());
        report.warnings.insert(report.warnings.end(), one.warnings.begin(),
                               one.warnings.end());
    }
    return report;
}

}  // namespace harness
