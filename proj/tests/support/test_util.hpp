// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the unit and acceptance suites: throwaway
// directories, file IO, and a thin HTTP client wrapper.
#pragma once

#include <httplib.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testutil {

namespace fs = std::filesystem;
using nlohmann::json;

// Compile definitions provided by the build:
//   HARNESS_REPO_SKILLS   - the bundled skill fixtures
//   HARNESS_TESTS_DIR     - tests/ source dir (golden files, extra fixtures)
//   HARNESS_CLI_BIN       - path to the built `harness` executable

inline fs::path repo_skills_dir() { return fs::path(HARNESS_REPO_SKILLS); }
inline fs::path tests_dir() { return fs::path(HARNESS_TESTS_DIR); }
inline fs::path golden_dir() { return tests_dir() / "golden"; }
inline fs::path fixtures_dir() { return tests_dir() / "fixtures"; }
inline std::string cli_bin() { return HARNESS_CLI_BIN; }

/// Unique directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "harness_test") {
        static std::mt19937_64 rng{std::random_device{}()};
        for (int attempt = 0; attempt < 16; ++attempt) {
            fs::path candidate = fs::temp_directory_path() /
                                 (tag + "_" + std::to_string(rng()));
            std::error_code ec;
            if (fs::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp directory for " + tag);
    }
    ~TempDir() {
        std::error_code ec;
        if (!path_.empty()) fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Runs a command line, returning {exit_code, combined stdout} (stderr is
/// folded into stdout so assertions can inspect diagnostics).
struct RunResult {
    int exit_code = -1;
    std::string output;
};

inline RunResult run_command(const std::string& command_line) {
    RunResult result;
    FILE* pipe = popen((command_line + " 2>&1").c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed: " + command_line);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

/// HTTP client bound to a loopback server under test.
class Client {
public:
    explicit Client(int port) : http_("127.0.0.1", port) {
        http_.set_read_timeout(30, 0);
    }

    struct Response {
        int status = 0;
        std::string body;
        std::string content_type;
        bool ok = false;
    };

    Response post(const std::string& path, const json& body,
                  const std::string& accept = "") {
        return post_raw(path, body.dump(), accept);
    }

    Response post_raw(const std::string& path, const std::string& body,
                      const std::string& accept = "") {
        httplib::Headers headers;
        if (!accept.empty()) headers.emplace("Accept", accept);
        auto res = http_.Post(path, headers, body, "application/json");
        if (!res) {
            // a keep-alive socket the server already closed; retry once on
            // a fresh connection
            res = http_.Post(path, headers, body, "application/json");
        }
        return convert(res);
    }

    Response get(const std::string& path) { return convert(http_.Get(path)); }

    /// One JSON-RPC exchange against the MCP mount.
    json rpc(const std::string& mcp_path, const json& request) {
        auto res = post_raw(mcp_path, request.dump());
        if (!res.ok || res.status != 200) {
            throw std::runtime_error("rpc transport failure, status " +
                                     std::to_string(res.status));
        }
        return json::parse(res.body);
    }

private:
    static Response convert(const httplib::Result& res) {
        Response out;
        if (!res) return out;
        out.ok = true;
        out.status = res->status;
        out.body = res->body;
        out.content_type = res->get_header_value("Content-Type");
        return out;
    }

    httplib::Client http_;
};

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    return parts;
}

}  // namespace testutil
