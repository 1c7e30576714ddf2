// SPDX-License-Identifier: Apache-2.0
#include "harness/lifecycle.hpp"

namespace harness {

LifecycleController::LifecycleController(LifecycleHooks mcp, std::optional<LifecycleHooks> user)
    : mcp_(std::move(mcp)), user_(std::move(user)) {}

void LifecycleController::start() {
    if (mcp_.up) mcp_.up();
    if (user_ && user_->up) {
        try {
            user_->up();
        } catch (...) {
            if (mcp_.down) mcp_.down();
            throw;
        }
    }
    started_ = true;
}

void LifecycleController::stop() {
    if (!started_) return;
    started_ = false;
    if (user_ && user_->down) user_->down();
    if (mcp_.down) mcp_.down();
}

LifecycleController compose_lifecycle(LifecycleHooks mcp, std::optional<LifecycleHooks> user) {
    return LifecycleController(std::move(mcp), std::move(user));
}

}  // namespace harness
