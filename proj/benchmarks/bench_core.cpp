// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the per-request hot path: canonical serialization,
// request validation, SSE framing, and metadata merging.

#include <benchmark/benchmark.h>

#include <json.hpp>

#include "harness/schema.hpp"
#include "harness/skill.hpp"
#include "harness/sse.hpp"

using nlohmann::json;

namespace {

const json kInputSchema = json::parse(R"({
    "type": "object",
    "properties": {
        "text": {"type": "string"},
        "max_length": {"type": "integer", "default": 100, "minimum": 1},
        "tags": {"type": "array", "items": {"type": "string"}}
    },
    "required": ["text"]
})");

const json kBody = json::parse(R"({
    "text": "The quick brown fox. Jumped over the lazy dog.",
    "max_length": 80,
    "tags": ["text", "nlp", "bench"]
})");

void BM_Canonicalize(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(harness::canonicalize(kInputSchema));
    }
}
BENCHMARK(BM_Canonicalize);

void BM_ValidateInput(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(harness::validate_against(kInputSchema, kBody));
    }
}
BENCHMARK(BM_ValidateInput);

void BM_ValidateInvalidInput(benchmark::State& state) {
    const json bad = json::parse(R"({"text": 7, "max_length": 0})");
    for (auto _ : state) {
        benchmark::DoNotOptimize(harness::validate_against(kInputSchema, bad));
    }
}
BENCHMARK(BM_ValidateInvalidInput);

void BM_EncodeSseEvent(benchmark::State& state) {
    harness::SseEvent event{harness::SseEvent::Type::chunk, json("partial: 25")};
    for (auto _ : state) {
        benchmark::DoNotOptimize(harness::encode_sse_event(event));
    }
}
BENCHMARK(BM_EncodeSseEvent);

void BM_MergeMetadata(benchmark::State& state) {
    harness::MetadataSource toml;
    toml.origin = harness::MetaOrigin::toml;
    toml.description = "Summarise text to a target length";
    toml.tags = std::vector<std::string>{"text", "nlp"};
    toml.timeout_secs = 30;
    harness::MetadataSource front;
    front.origin = harness::MetaOrigin::front_matter;
    front.description = "other";
    harness::MetadataSource folder;
    folder.origin = harness::MetaOrigin::folder_name;
    folder.description = "summarize";
    const std::vector<harness::MetadataSource> sources{toml, front, folder};
    for (auto _ : state) {
        benchmark::DoNotOptimize(harness::merge_metadata(sources));
    }
}
BENCHMARK(BM_MergeMetadata);

}  // namespace

BENCHMARK_MAIN();
