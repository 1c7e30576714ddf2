// SPDX-License-Identifier: Apache-2.0
//
// Operations entry point: scaffold projects, validate and list skill
// folders, run example self-tests, and launch the dual-transport server.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <iostream>

#include "harness/discovery.hpp"
#include "harness/scaffold.hpp"
#include "harness/server.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailures = 1;   // validation or example failures
constexpr int kExitUsage = 2;      // usage / environment errors

int cmd_init(const fs::path& target, bool force, const std::vector<fs::path>& skill_srcs,
             const std::vector<fs::path>& dir_srcs) {
    try {
        harness::ScaffoldReport report;
        if (skill_srcs.empty() && dir_srcs.empty()) {
            report = harness::init_project(target, force);
        } else {
            if (fs::exists(target) && !fs::is_directory(target)) {
                std::cerr << target << " exists and is not a directory\n";
                return kExitUsage;
            }
            const fs::path skills_dir = target / "skills";
            fs::create_directories(skills_dir);
            for (const auto& src : skill_srcs) {
                auto one = harness::import_skill(src, skills_dir);
                report.created.insert(report.created.end(), one.created.begin(),
                                      one.created.end());
                report.warnings.insert(report.warnings.end(), one.warnings.begin(),
                                       one.warnings.end());
            }
            for (const auto& src : dir_srcs) {
                auto one = harness::import_skills_dir(src, skills_dir);
                report.created.insert(report.created.end(), one.created.begin(),
                                      one.created.end());
                report.warnings.insert(report.warnings.end(), one.warnings.begin(),
                                       one.warnings.end());
            }
        }
        for (const auto& c : report.created) std::cout << "created " << c << "\n";
        for (const auto& w : report.warnings) std::cerr << w << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_validate(const fs::path& skills_dir, bool as_json) {
    if (!fs::is_directory(skills_dir)) {
        std::cerr << "skills directory does not exist: " << skills_dir << "\n";
        return kExitUsage;
    }
    harness::HandlerRegistry registry;
    std::vector<fs::path> folders;
    for (const auto& e : fs::directory_iterator(skills_dir)) {
        if (e.is_directory()) folders.push_back(e.path());
    }
    std::sort(folders.begin(), folders.end());
    bool all_valid = true;
    json out = json::array();
    for (const auto& folder : folders) {
        auto report = harness::validate_folder(folder, registry);
        all_valid = all_valid && report.valid;
        if (as_json) {
            out.push_back(report.to_json());
        } else {
            std::cout << folder.filename().string() << ": "
                      << (report.valid ? "valid" : "invalid") << "\n";
            for (const auto& m : report.missing) std::cout << "  missing: " << m << "\n";
            for (const auto& w : report.warnings) std::cout << "  warning: " << w << "\n";
        }
    }
    if (as_json) std::cout << out.dump() << "\n";
    return all_valid ? kExitOk : kExitFailures;
}

int cmd_list(const fs::path& skills_dir, bool as_json) {
    try {
        harness::HandlerRegistry registry;
        auto result = harness::discover(skills_dir, registry);
        if (as_json) {
            json out = json::array();
            for (const auto& s : result.skills) {
                out.push_back({{"name", s->name},
                               {"description", s->meta.description},
                               {"tags", s->meta.tags},
                               {"streaming", harness::is_streaming(*s)},
                               {"is_mcp", s->meta.is_mcp},
                               {"timeout_secs", s->meta.timeout_secs}});
            }
            std::cout << out.dump() << "\n";
        } else {
            for (const auto& s : result.skills) {
                std::cout << s->name << "  streaming: " << (harness::is_streaming(*s) ? "yes" : "no")
                          << "  mcp: " << (s->meta.is_mcp ? "yes" : "no") << "  "
                          << s->meta.description << "\n";
            }
            std::cout << result.skills.size() << " skills\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_test(const fs::path& skills_dir, bool as_json) {
    try {
        harness::HandlerRegistry registry;
        auto result = harness::discover(skills_dir, registry);
        bool all_pass = true;
        json out = json::array();
        for (const auto& skill : result.skills) {
            if (skill->examples.empty()) {
                if (as_json) {
                    out.push_back({{"skill", skill->name}, {"skipped", true}});
                } else {
                    std::cout << skill->name << ": skipped (no examples)\n";
                }
                continue;
            }
            auto reports = harness::run_examples(*skill, registry);
            for (const auto& r : reports) {
                all_pass = all_pass && r.pass;
                if (as_json) {
                    out.push_back({{"skill", skill->name},
                                   {"example", r.file.filename().string()},
                                   {"pass", r.pass},
                                   {"message", r.message}});
                } else {
                    std::cout << skill->name << "/" << r.file.filename().string() << ": "
                              << (r.pass ? "pass" : "FAIL - " + r.message) << "\n";
                }
            }
        }
        if (as_json) std::cout << out.dump() << "\n";
        return all_pass ? kExitOk : kExitFailures;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_serve(const harness::ServerConfig& config) {
    try {
        harness::enforce_loopback(config);
        auto registry = std::make_shared<harness::HandlerRegistry>();
        auto result = harness::discover(config.skills_dirs, *registry);
        for (const auto& report : result.reports) {
            if (!report.valid) {
                std::cerr << "skipping " << report.path << ":";
                for (const auto& m : report.missing) std::cerr << " missing " << m << ";";
                std::cerr << "\n";
            }
            for (const auto& w : report.warnings) {
                std::cerr << report.path.filename().string() << ": " << w << "\n";
            }
        }
        harness::HarnessServer server(config, result.skills, registry);
        std::cout << "serving " << result.skills.size() << " skills on http://"
                  << config.host << ":" << config.port << " (MCP at " << config.mcp_path
                  << ")\n";
        if (!server.listen()) {
            std::cerr << "failed to bind " << config.host << ":" << config.port << "\n";
            return kExitUsage;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skill-first dual-transport server"};
    app.require_subcommand(1);

    // init
    auto* init = app.add_subcommand("init", "Scaffold a project or import skill folders");
    fs::path init_target = ".";
    bool init_force = false;
    std::vector<fs::path> init_skills, init_dirs;
    init->add_option("path", init_target, "Target project directory");
    init->add_flag("--force", init_force, "Scaffold into a non-empty directory");
    init->add_option("--skill", init_skills, "Import one external skill folder");
    init->add_option("--skills-dir", init_dirs, "Import every subfolder of a skills directory");

    // validate / list / test
    fs::path skills_dir = "skills";
    bool as_json = false;
    auto* validate = app.add_subcommand("validate", "Validate every skill folder");
    auto* list = app.add_subcommand("list", "List discovered skills");
    auto* test = app.add_subcommand("test", "Run bundled example self-tests");
    for (auto* sub : {validate, list, test}) {
        sub->add_option("skills_dir", skills_dir, "Skills directory")
            ->envname("SKILLS_DIR");
        sub->add_flag("--json", as_json, "Machine-readable output");
    }

    // serve
    auto* serve = app.add_subcommand("serve", "Run the dual-transport server");
    harness::ServerConfig config;
    std::vector<fs::path> serve_dirs;
    serve->add_option("--host", config.host, "Bind host")->envname("HOST");
    serve->add_option("--port", config.port, "Bind port")
        ->envname("PORT")
        ->check(CLI::Range(1, 65535));
    serve->add_option("--skills-dir", serve_dirs, "Skills directory (repeatable)")
        ->envname("SKILLS_DIR");
    serve->add_option("--mcp-path", config.mcp_path, "MCP mount path")->envname("MCP_PATH");
    serve->add_flag("--enable-edit-endpoints", config.enable_edit_endpoints,
                    "Enable POST /skills/{name}/edit (loopback only)")
        ->envname("ENABLE_EDIT_ENDPOINTS");
    serve->add_option("--title", config.title, "Server title");
    serve->add_option("--version", config.version, "Server version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (init->parsed()) return cmd_init(init_target, init_force, init_skills, init_dirs);
    if (validate->parsed()) return cmd_validate(skills_dir, as_json);
    if (list->parsed()) return cmd_list(skills_dir, as_json);
    if (test->parsed()) return cmd_test(skills_dir, as_json);
    if (serve->parsed()) {
        if (serve_dirs.empty()) serve_dirs.push_back("skills");
        config.skills_dirs = serve_dirs;
        if (config.mcp_path.empty() || config.mcp_path[0] != '/') {
            std::cerr << "mcp path must start with '/'\n";
            return kExitUsage;
        }
        return cmd_serve(config);
    }
    return kExitUsage;
}
