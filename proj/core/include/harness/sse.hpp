// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace harness {

/// One wire unit of the streaming protocol. A response stream carries
/// chunk* (done|error) for streaming skills and (result done)|error for
/// unary skills.
struct SseEvent {
    enum class Type { chunk, result, done, error };
    Type type = Type::done;
    nlohmann::json data;
};

std::string to_string(SseEvent::Type type);

/// Exactly `event: <name>\n` `data: <canonical JSON>\n` `\n`. The data
/// line cannot span lines because canonical JSON is single-line.
std::string encode_sse_event(const SseEvent& event);

/// Parses a full response body back into events; nullopt when the body
/// does not match the framing. Used by tests and clients.
std::optional<std::vector<SseEvent>> parse_sse_body(const std::string& body);

}  // namespace harness
