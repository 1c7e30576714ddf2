// SPDX-License-Identifier: Apache-2.0
#include "harness/sse.hpp"

#include "harness/schema.hpp"

namespace harness {

using nlohmann::json;

std::string to_string(SseEvent::Type type) {
    switch (type) {
        case SseEvent::Type::chunk: return "chunk";
        case SseEvent::Type::result: return "result";
        case SseEvent::Type::done: return "done";
        case SseEvent::Type::error: return "error";
    }
    return "unknown";
}

std::string encode_sse_event(const SseEvent& event) {
    return "event: " + to_string(event.type) + "\ndata: " + canonicalize(event.data) + "\n\n";
}

std::optional<std::vector<SseEvent>> parse_sse_body(const std::string& body) {
    std::vector<SseEvent> events;
    size_t pos = 0;
    while (pos < body.size()) {
        size_t end = body.find("\n\n", pos);
        if (end == std::string::npos) return std::nullopt;  // unterminated frame
        std::string frame = body.substr(pos, end - pos);
        pos = end + 2;

        size_t nl = frame.find('\n');
        if (nl == std::string::npos) return std::nullopt;
        std::string event_line = frame.substr(0, nl);
        std::string data_line = frame.substr(nl + 1);
        if (event_line.rfind("event: ", 0) != 0 || data_line.rfind("data: ", 0) != 0) {
            return std::nullopt;
        }
        if (data_line.find('\n') != std::string::npos) return std::nullopt;

        SseEvent e;
        std::string name = event_line.substr(7);
        if (name == "chunk") e.type = SseEvent::Type::chunk;
        else if (name == "result") e.type = SseEvent::Type::result;
        else if (name == "done") e.type = SseEvent::Type::done;
        else if (name == "error") e.type = SseEvent::Type::error;
        else return std::nullopt;

        e.data = json::parse(data_line.substr(6), nullptr, false);
        if (e.data.is_discarded()) return std::nullopt;
        events.push_back(std::move(e));
    }
    return events;
}

}  // namespace harness
