// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "harness/lifecycle.hpp"
#include "harness/mcp.hpp"
#include "harness/openapi.hpp"
#include "harness/runtime.hpp"
#include "harness/skill.hpp"

namespace httplib {
class Server;
}

namespace harness {

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8000;
    std::vector<std::filesystem::path> skills_dirs;
    std::string mcp_path = "/mcp";
    bool enable_edit_endpoints = false;
    std::string title = "harness";
    std::string version = "0.1.0";
};

bool is_loopback_host(const std::string& host);

/// Refuses edit endpoints on a non-loopback host; called before the
/// listener binds. Throws std::runtime_error on violation.
void enforce_loopback(const ServerConfig& config);

/// The single-process surface: /skills routes with content negotiation,
/// SSE encoding, gated edit endpoints, /openapi.json, /docs, and the MCP
/// mount, all on one listener.
class HarnessServer {
public:
    HarnessServer(ServerConfig config, std::vector<std::shared_ptr<Skill>> skills,
                  std::shared_ptr<HandlerRegistry> registry,
                  std::optional<LifecycleHooks> user_hooks = std::nullopt);
    ~HarnessServer();

    /// Blocking: enforces the loopback rule, runs lifecycle startup,
    /// binds config.host:config.port, serves until stop().
    bool listen();

    /// Test/embedding entry: binds an ephemeral port on config.host and
    /// serves on a background thread. Returns the bound port.
    int start_background();
    void stop();

    const std::vector<std::shared_ptr<Skill>>& skills() const { return skills_; }
    const HandlerRegistry& registry() const { return *registry_; }
    bool mcp_ready() const { return mcp_ready_.load(); }
    const nlohmann::json& openapi_doc() const { return openapi_; }

private:
    void setup_routes();
    std::shared_ptr<Skill> find_skill(const std::string& name) const;

    ServerConfig config_;
    std::vector<std::shared_ptr<Skill>> skills_;
    std::shared_ptr<HandlerRegistry> registry_;
    nlohmann::json openapi_;
    mcp::Context mcp_ctx_;
    std::atomic<bool> mcp_ready_{false};
    LifecycleController lifecycle_;
    std::unique_ptr<httplib::Server> http_;
    std::thread serve_thread_;
};

}  // namespace harness
