// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>

namespace harness {

struct LifecycleHooks {
    std::function<void()> up;
    std::function<void()> down;
};

/// Nested startup/shutdown: the MCP subsystem starts first and stops
/// last; user hooks run inside that scope. A user startup failure still
/// shuts the MCP subsystem down before the error propagates.
class LifecycleController {
public:
    LifecycleController(LifecycleHooks mcp, std::optional<LifecycleHooks> user);

    void start();  // propagates user startup errors after inner cleanup
    void stop();

private:
    LifecycleHooks mcp_;
    std::optional<LifecycleHooks> user_;
    bool started_ = false;
};

LifecycleController compose_lifecycle(LifecycleHooks mcp,
                                      std::optional<LifecycleHooks> user = std::nullopt);

}  // namespace harness
