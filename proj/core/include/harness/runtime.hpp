// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "harness/skill.hpp"

namespace harness {

struct HandlerError {
    enum class Kind { timeout, failed, bad_output };
    Kind kind = Kind::failed;
    std::string message;
};

/// "handler timeout after <N>s" with N in shortest form.
std::string timeout_message(double timeout_secs);

/// Consumer interface handed to in-process streaming handlers. emit()
/// returns false once the consumer has gone away; handlers should stop.
struct ChunkSink {
    virtual ~ChunkSink() = default;
    virtual bool emit(nlohmann::json chunk) = 0;
};

using UnaryHandler = std::function<nlohmann::json(const nlohmann::json&)>;
using StreamingHandler = std::function<void(const nlohmann::json&, ChunkSink&)>;

/// In-process handlers, keyed by skill name (or override key). Immutable
/// after startup.
class HandlerRegistry {
public:
    struct Entry {
        BindingKind kind = BindingKind::in_process_unary;
        std::string description;
        UnaryHandler unary;
        StreamingHandler streaming;
    };

    void add_unary(const std::string& key, UnaryHandler fn, std::string description = "");
    void add_streaming(const std::string& key, StreamingHandler fn,
                       std::string description = "");
    const Entry* find(const std::string& key) const;
    bool contains(const std::string& key) const { return find(key) != nullptr; }

private:
    std::map<std::string, Entry> entries_;
};

using UnaryOutcome = std::variant<nlohmann::json, HandlerError>;

/// Incrementally delivered chunks with a single terminal state. Pull with
/// next(); once it returns false, error() tells success from failure.
/// Abandoning the stream (destruction) stops subprocess producers.
class ChunkStream {
public:
    ChunkStream();
    ~ChunkStream();
    ChunkStream(ChunkStream&&) noexcept = default;
    ChunkStream& operator=(ChunkStream&&) noexcept = default;

    /// Blocks for the next chunk. Returns false when the stream has
    /// terminated (normally or with error()).
    bool next(nlohmann::json& chunk);
    const std::optional<HandlerError>& error() const;

    struct State;
    explicit ChunkStream(std::shared_ptr<State> state);

private:
    std::shared_ptr<State> state_;
};

/// Runs a unary binding to completion under the deadline. Output must
/// validate against output_schema when one is given.
UnaryOutcome invoke_unary(const HandlerRegistry& registry, const HandlerBinding& binding,
                          const nlohmann::json& input, double timeout_secs,
                          const SchemaDoc* output_schema = nullptr);

/// Starts a streaming binding; chunks become available on the returned
/// stream as the handler produces them. The whole stream must finish
/// within timeout_secs.
ChunkStream invoke_streaming(const HandlerRegistry& registry, const HandlerBinding& binding,
                             const nlohmann::json& input, double timeout_secs);

/// Subprocess protocol: stdin = one UTF-8 JSON document then EOF;
/// stdout = one JSON document (unary) or one JSON value per line
/// (streaming); exit 0 = success. Stderr is captured up to 4096 bytes.
UnaryOutcome run_subprocess_unary(const std::vector<std::string>& command,
                                  const nlohmann::json& input, double timeout_secs,
                                  const std::optional<std::filesystem::path>& workdir = {});
ChunkStream run_subprocess_streaming(const std::vector<std::string>& command,
                                     const nlohmann::json& input, double timeout_secs,
                                     const std::optional<std::filesystem::path>& workdir = {});

struct EditError {
    enum class Kind { not_found, kind_mismatch, malformed };
    Kind kind = Kind::malformed;
    std::string message;
};

/// Installs an edit override from {"registry_key": ...} or
/// {"command": [...]} after checking the streaming kind matches.
std::optional<EditError> apply_edit_override(Skill& skill, const nlohmann::json& override_spec,
                                             const HandlerRegistry& registry);
void clear_edit_override(Skill& skill);

struct ExampleReport {
    std::filesystem::path file;
    bool pass = false;
    std::string message;
};

/// Replays each bundled example through the skill's effective binding and
/// compares outputs (deep equality; streaming examples against the
/// collected chunk string forms).
std::vector<ExampleReport> run_examples(const Skill& skill, const HandlerRegistry& registry);

}  // namespace harness
