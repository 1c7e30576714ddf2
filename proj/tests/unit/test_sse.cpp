// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <json.hpp>

#include "harness/sse.hpp"

using harness::encode_sse_event;
using harness::parse_sse_body;
using harness::SseEvent;
using nlohmann::json;

TEST_CASE("encode: chunk framing is exact") {
    CHECK(encode_sse_event({SseEvent::Type::chunk, json("hi")}) ==
          "event: chunk\ndata: \"hi\"\n\n");
}

TEST_CASE("encode: done carries JSON null") {
    CHECK(encode_sse_event({SseEvent::Type::done, json(nullptr)}) ==
          "event: done\ndata: null\n\n");
}

TEST_CASE("encode: error detail object") {
    SseEvent e{SseEvent::Type::error, json{{"detail", "handler timeout after 1s"}}};
    CHECK(encode_sse_event(e) ==
          "event: error\ndata: {\"detail\":\"handler timeout after 1s\"}\n\n");
}

TEST_CASE("encode: result payload is canonical single-line JSON") {
    SseEvent e{SseEvent::Type::result, json{{"b", 1}, {"a", 2}}};
    CHECK(encode_sse_event(e) == "event: result\ndata: {\"a\":2,\"b\":1}\n\n");
}

TEST_CASE("encode: newline-bearing strings stay on one data line") {
    // JSON escaping keeps the payload single-line, so the framing survives.
    std::string body = encode_sse_event({SseEvent::Type::chunk, json("a\nb")});
    CHECK(body == "event: chunk\ndata: \"a\\nb\"\n\n");
    auto parsed = parse_sse_body(body);
    REQUIRE(parsed.has_value());
    CHECK((*parsed)[0].data == json("a\nb"));
}

TEST_CASE("parse: round-trips a full response body") {
    std::string body;
    body += encode_sse_event({SseEvent::Type::chunk, json("partial: 9")});
    body += encode_sse_event({SseEvent::Type::chunk, json("norm: 5")});
    body += encode_sse_event({SseEvent::Type::done, json(nullptr)});
    auto events = parse_sse_body(body);
    REQUIRE(events.has_value());
    REQUIRE(events->size() == 3);
    CHECK((*events)[0].type == SseEvent::Type::chunk);
    CHECK((*events)[0].data == json("partial: 9"));
    CHECK((*events)[2].type == SseEvent::Type::done);
    CHECK((*events)[2].data.is_null());
}

TEST_CASE("parse: rejects bodies that break the framing") {
    CHECK_FALSE(parse_sse_body("event: chunk\n").has_value());
    CHECK_FALSE(parse_sse_body("data: \"x\"\n\n").has_value());
    CHECK_FALSE(parse_sse_body("event: chunk\ndata: not json\n\n").has_value());
    CHECK_FALSE(parse_sse_body("event: bogus\ndata: 1\n\n").has_value());
    CHECK_FALSE(parse_sse_body("event: chunk\ndata: 1\n").has_value());  // missing blank
}

TEST_CASE("parse: empty body is an empty event sequence") {
    auto events = parse_sse_body("");
    REQUIRE(events.has_value());
    CHECK(events->empty());
}
