// SPDX-License-Identifier: Apache-2.0
#include "harness/discovery.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "harness/toml_lite.hpp"

namespace harness {

namespace fs = std::filesystem;
using nlohmann::json;

nlohmann::json FolderReport::to_json() const {
    return json{{"path", path.string()},
                {"valid", valid},
                {"missing", missing},
                {"warnings", warnings}};
}

namespace {

std::optional<std::string> read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string strip_quotes(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                          (v.front() == '\'' && v.back() == '\''))) {
        return v.substr(1, v.size() - 2);
    }
    return v;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> parse_inline_list(const std::string& v) {
    std::vector<std::string> items;
    std::string body = v.substr(1, v.size() - 2);
    std::string item;
    std::istringstream in(body);
    while (std::getline(in, item, ',')) {
        std::string t = strip_quotes(trim(item));
        if (!t.empty()) items.push_back(t);
    }
    return items;
}

}  // namespace

std::optional<FrontMatterMeta> parse_front_matter(const std::string& text,
                                                  std::vector<std::string>* warnings) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "---") return std::nullopt;

    FrontMatterMeta meta;
    bool closed = false;
    bool in_tags_list = false;
    std::vector<std::string> dash_tags;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t == "---") {
            closed = true;
            break;
        }
        if (in_tags_list) {
            if (t.rfind("- ", 0) == 0 || t == "-") {
                std::string item = strip_quotes(trim(t.substr(1)));
                if (!item.empty()) dash_tags.push_back(item);
                continue;
            }
            in_tags_list = false;
            meta.tags = dash_tags;
        }
        if (t.empty() || t[0] == '#') continue;
        size_t colon = t.find(':');
        if (colon == std::string::npos) {
            if (warnings) warnings->push_back("front-matter line ignored: " + t);
            continue;
        }
        std::string key = trim(t.substr(0, colon));
        std::string value = trim(t.substr(colon + 1));
        if (key == "name") {
            meta.name = strip_quotes(value);
        } else if (key == "description") {
            meta.description = strip_quotes(value);
        } else if (key == "tags") {
            if (value.empty()) {
                in_tags_list = true;
                dash_tags.clear();
            } else if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
                meta.tags = parse_inline_list(value);
            } else {
                meta.tags = std::vector<std::string>{strip_quotes(value)};
            }
        } else if (warnings) {
            warnings->push_back("front-matter key ignored: " + key);
        }
    }
    if (in_tags_list) meta.tags = dash_tags;
    if (!closed) {
        if (warnings) warnings->push_back("unclosed front-matter fence; metadata ignored");
        return std::nullopt;
    }
    return meta;
}

SkillManifest parse_skill_toml(const std::string& text) {
    SkillManifest manifest;
    manifest.source.origin = MetaOrigin::toml;
    toml::Document doc = toml::parse(text);

    for (const auto& [table_name, table] : doc.tables) {
        if (table_name == "skill") {
            for (const auto& [key, value] : table) {
                if (key == "description") {
                    if (auto* s = std::get_if<std::string>(&value)) {
                        manifest.source.description = *s;
                    } else {
                        manifest.warnings.push_back("skill.description must be a string");
                    }
                } else if (key == "is_mcp") {
                    if (auto* b = std::get_if<bool>(&value)) {
                        manifest.source.is_mcp = *b;
                    } else {
                        manifest.warnings.push_back("skill.is_mcp must be a boolean");
                    }
                } else if (key == "tags") {
                    if (auto* arr = std::get_if<std::vector<std::string>>(&value)) {
                        manifest.source.tags = *arr;
                    } else {
                        manifest.warnings.push_back("skill.tags must be an array of strings");
                    }
                } else if (key == "timeout_secs") {
                    if (auto* n = std::get_if<double>(&value)) {
                        manifest.source.timeout_secs = *n;
                    } else {
                        manifest.warnings.push_back("skill.timeout_secs must be a number");
                    }
                } else if (key == "streaming") {
                    if (auto* b = std::get_if<bool>(&value)) {
                        manifest.streaming = *b;
                    } else {
                        manifest.warnings.push_back("skill.streaming must be a boolean");
                    }
                } else {
                    manifest.warnings.push_back("unknown key [skill]." + key + " ignored");
                }
            }
        } else if (table_name == "handler") {
            for (const auto& [key, value] : table) {
                if (key == "command") {
                    if (auto* arr = std::get_if<std::vector<std::string>>(&value)) {
                        manifest.command = *arr;
                    } else {
                        manifest.warnings.push_back(
                            "handler.command must be an array of strings");
                    }
                } else {
                    manifest.warnings.push_back("unknown key [handler]." + key + " ignored");
                }
            }
        } else if (!table_name.empty()) {
            manifest.warnings.push_back("unknown table [" + table_name + "] ignored");
        } else if (!table.empty()) {
            manifest.warnings.push_back("top-level keys ignored; use the [skill] table");
        }
    }
    return manifest;
}

namespace {

// Loads one folder; fills the report and, when valid, the skill.
std::shared_ptr<Skill> inspect_folder(const fs::path& folder, const HandlerRegistry& registry,
                                      FolderReport& report) {
    report.path = folder;
    const std::string name = folder.filename().string();
    if (!is_valid_skill_name(name)) {
        report.missing.push_back("url-safe folder name");
        report.warnings.push_back("folder name must match [a-z0-9_-]+: " + name);
        return nullptr;
    }

    auto skill = std::make_shared<Skill>();
    skill->name = name;

    // models.json: {"input": <schema>, "output": <schema>}
    json models;
    auto models_text = read_file(folder / "models.json");
    if (!models_text) {
        report.missing.push_back("models.json");
    } else {
        models = json::parse(*models_text, nullptr, false);
        if (models.is_discarded() || !models.is_object() || !models.contains("input") ||
            !models.contains("output") || !models["input"].is_object() ||
            !models["output"].is_object()) {
            report.missing.push_back("models.json");
            report.warnings.push_back(
                "models.json must be {\"input\": <schema>, \"output\": <schema>}");
        } else {
            for (const char* role : {"input", "output"}) {
                const json& schema = models[role];
                if (schema.value("type", "") != "object") {
                    report.missing.push_back("models.json");
                    report.warnings.push_back(std::string(role) +
                                              " schema must have \"type\": \"object\"");
                    break;
                }
                if (auto err = schema_subset_error(schema)) {
                    report.missing.push_back("models.json");
                    report.warnings.push_back(std::string(role) + " schema rejected: " + *err);
                    break;
                }
            }
        }
    }
    if (std::find(report.missing.begin(), report.missing.end(), "models.json") ==
            report.missing.end() &&
        models.is_object()) {
        skill->input_schema = SchemaDoc{models["input"], name, SchemaRole::input};
        skill->output_schema = SchemaDoc{models["output"], name, SchemaRole::output};
    }

    // skill.toml (optional)
    SkillManifest manifest;
    bool have_manifest = false;
    if (auto toml_text = read_file(folder / "skill.toml")) {
        try {
            manifest = parse_skill_toml(*toml_text);
            have_manifest = true;
            for (const auto& w : manifest.warnings) report.warnings.push_back(w);
        } catch (const toml::ParseError& e) {
            report.missing.push_back("skill.toml");
            report.warnings.push_back(e.what());
        }
    }

    // handler binding: registry entry named after the folder, or a
    // subprocess command from the manifest
    const auto* entry = registry.find(name);
    if (entry) {
        skill->binding.kind = entry->kind;
        skill->binding.registry_key = name;
    } else if (manifest.command && !manifest.command->empty()) {
        skill->binding.kind = BindingKind::subprocess;
        skill->binding.command = *manifest.command;
        skill->binding.command_streaming = manifest.streaming.value_or(false);
        skill->binding.workdir = folder;
    } else {
        report.missing.push_back("handler binding");
    }

    // metadata sources, most explicit first
    std::vector<MetadataSource> sources;
    if (have_manifest) sources.push_back(manifest.source);
    if (auto md_text = read_file(folder / "SKILL.md")) {
        std::vector<std::string> fm_warnings;
        if (auto fm = parse_front_matter(*md_text, &fm_warnings)) {
            if (fm->name && *fm->name != name) {
                report.warnings.push_back("SKILL.md name '" + *fm->name +
                                          "' differs from folder name; keeping '" + name +
                                          "'");
            }
            MetadataSource src;
            src.origin = MetaOrigin::front_matter;
            src.description = fm->description;
            src.tags = fm->tags;
            sources.push_back(std::move(src));
        }
        for (const auto& w : fm_warnings) report.warnings.push_back(w);
    }
    if (entry && !entry->description.empty()) {
        MetadataSource src;
        src.origin = MetaOrigin::docstring;
        src.description = entry->description;
        sources.push_back(std::move(src));
    }
    {
        MetadataSource src;
        src.origin = MetaOrigin::folder_name;
        src.description = name;
        sources.push_back(std::move(src));
    }
    try {
        skill->meta = merge_metadata(sources);
    } catch (const std::exception& e) {
        report.missing.push_back("valid metadata");
        report.warnings.push_back(e.what());
    }

    if (!report.missing.empty()) return nullptr;
    report.valid = true;

    // defaults/input.json (optional; dropped with a warning when invalid)
    if (auto defaults_text = read_file(folder / "defaults" / "input.json")) {
        json defaults = json::parse(*defaults_text, nullptr, false);
        if (defaults.is_discarded()) {
            report.warnings.push_back("defaults/input.json is not valid JSON; dropped");
        } else {
            auto check = validate_input(skill->input_schema, defaults);
            if (!check.ok()) {
                report.warnings.push_back(
                    "defaults/input.json fails the input schema; dropped");
            } else {
                skill->defaults = defaults;
            }
        }
    }

    // examples/*.json (optional)
    const fs::path examples_dir = folder / "examples";
    if (fs::is_directory(examples_dir)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(examples_dir)) {
            if (e.is_regular_file() && e.path().extension() == ".json") {
                files.push_back(e.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            auto text = read_file(file);
            json doc = text ? json::parse(*text, nullptr, false) : json();
            if (!text || doc.is_discarded() || !doc.is_object() || !doc.contains("input") ||
                !doc.contains("output")) {
                report.warnings.push_back("example " + file.filename().string() +
                                          " must be {\"input\":..., \"output\":...}; dropped");
                continue;
            }
            auto check = validate_input(skill->input_schema, doc["input"]);
            if (!check.ok()) {
                report.warnings.push_back("example " + file.filename().string() +
                                          " input fails the input schema; dropped");
                continue;
            }
            skill->examples.push_back(Example{doc["input"], doc["output"], file});
        }
    }
    return skill;
}

}  // namespace

FolderReport validate_folder(const fs::path& path, const HandlerRegistry& registry) {
    FolderReport report;
    if (!fs::is_directory(path)) {
        report.path = path;
        report.missing.push_back("directory");
        return report;
    }
    inspect_folder(path, registry, report);
    return report;
}

DiscoveryResult discover(const std::vector<fs::path>& skills_dirs,
                         const HandlerRegistry& registry) {
    DiscoveryResult result;
    std::map<std::string, fs::path> seen;  // skill name -> folder
    for (const auto& dir : skills_dirs) {
        if (!fs::is_directory(dir)) {
            throw std::runtime_error("skills directory does not exist: " + dir.string());
        }
        std::vector<fs::path> folders;
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.is_directory()) folders.push_back(e.path());
        }
        std::sort(folders.begin(), folders.end());
        for (const auto& folder : folders) {
            FolderReport report;
            auto skill = inspect_folder(folder, registry, report);
            if (skill) {
                auto [it, inserted] = seen.emplace(skill->name, folder);
                if (!inserted) {
                    throw std::runtime_error("duplicate skill name '" + skill->name +
                                             "' from " + it->second.string() + " and " +
                                             folder.string());
                }
                result.schemas.emplace(skill->input_schema.key(), skill->input_schema);
                result.schemas.emplace(skill->output_schema.key(), skill->output_schema);
                result.skills.push_back(std::move(skill));
            }
            result.reports.push_back(std::move(report));
        }
    }
    std::sort(result.skills.begin(), result.skills.end(),
              [](const auto& a, const auto& b) { return a->name < b->name; });
    return result;
}

DiscoveryResult discover(const fs::path& skills_dir, const HandlerRegistry& registry) {
    return discover(std::vector<fs::path>{skills_dir}, registry);
}

}  // namespace harness
