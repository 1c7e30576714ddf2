// SPDX-License-Identifier: Apache-2.0
#include "harness/runtime.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <sstream>
#include <thread>

namespace harness {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

std::string format_secs(double secs) {
    if (secs == std::floor(secs) && std::abs(secs) < 1e15) {
        return std::to_string(static_cast<long long>(secs));
    }
    std::ostringstream os;
    os << secs;
    return os.str();
}

constexpr size_t kStderrCap = 4096;

void append_capped(std::string& buf, const char* data, size_t n, bool& truncated) {
    buf.append(data, n);
    if (buf.size() > kStderrCap) {
        buf.erase(0, buf.size() - kStderrCap);
        truncated = true;
    }
}

std::string stderr_tail(const std::string& buf, bool truncated) {
    std::string tail = buf;
    if (truncated) tail += " (stderr truncated to 4096 bytes)";
    return tail;
}

}  // namespace

std::string timeout_message(double timeout_secs) {
    return "handler timeout after " + format_secs(timeout_secs) + "s";
}

void HandlerRegistry::add_unary(const std::string& key, UnaryHandler fn,
                                std::string description) {
    Entry e;
    e.kind = BindingKind::in_process_unary;
    e.description = std::move(description);
    e.unary = std::move(fn);
    entries_[key] = std::move(e);
}

void HandlerRegistry::add_streaming(const std::string& key, StreamingHandler fn,
                                    std::string description) {
    Entry e;
    e.kind = BindingKind::in_process_streaming;
    e.description = std::move(description);
    e.streaming = std::move(fn);
    entries_[key] = std::move(e);
}

const HandlerRegistry::Entry* HandlerRegistry::find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// ChunkStream

struct ChunkStream::State {
    std::mutex m;
    std::condition_variable cv;
    std::deque<json> queue;
    bool done = false;
    bool abandoned = false;
    std::optional<HandlerError> err;
    Clock::time_point deadline;
    double timeout_secs = 0;
    pid_t child = -1;  // killed on abandonment

    bool push(json chunk) {
        std::lock_guard lock(m);
        if (abandoned) return false;
        queue.push_back(std::move(chunk));
        cv.notify_all();
        return true;
    }

    void finish(std::optional<HandlerError> e) {
        std::lock_guard lock(m);
        if (!done) {
            if (e && !err) err = std::move(e);
            done = true;
        }
        cv.notify_all();
    }
};

ChunkStream::ChunkStream() : state_(std::make_shared<State>()) {
    state_->done = true;
}

ChunkStream::ChunkStream(std::shared_ptr<State> state) : state_(std::move(state)) {}

ChunkStream::~ChunkStream() {
    if (!state_) return;
    std::lock_guard lock(state_->m);
    state_->abandoned = true;
    if (state_->child > 0) kill(state_->child, SIGKILL);
    state_->cv.notify_all();
}

bool ChunkStream::next(json& chunk) {
    std::unique_lock lock(state_->m);
    state_->cv.wait_until(lock, state_->deadline,
                          [&] { return !state_->queue.empty() || state_->done; });
    if (!state_->queue.empty()) {
        chunk = std::move(state_->queue.front());
        state_->queue.pop_front();
        return true;
    }
    if (state_->done) return false;
    // deadline passed with the producer still running
    if (!state_->err) {
        state_->err = HandlerError{HandlerError::Kind::timeout,
                                   timeout_message(state_->timeout_secs)};
    }
    state_->abandoned = true;
    state_->done = true;
    if (state_->child > 0) kill(state_->child, SIGKILL);
    return false;
}

const std::optional<HandlerError>& ChunkStream::error() const { return state_->err; }

namespace {

// ---------------------------------------------------------------------------
// Subprocess plumbing

struct ChildProc {
    pid_t pid = -1;
    int stdin_fd = -1;
    int stdout_fd = -1;
    int stderr_fd = -1;
    std::string spawn_error;

    bool ok() const { return pid > 0; }
};

void close_fd(int& fd) {
    if (fd >= 0) {
        ::close(fd);
        fd = -1;
    }
}

ChildProc spawn_child(const std::vector<std::string>& command,
                      const std::optional<std::filesystem::path>& workdir) {
    static const int ignore_sigpipe = [] {
        ::signal(SIGPIPE, SIG_IGN);
        return 0;
    }();
    (void)ignore_sigpipe;

    ChildProc child;
    if (command.empty()) {
        child.spawn_error = "empty command";
        return child;
    }
    // Everything the child touches between fork and exec must be prepared
    // up front: the child of a multithreaded parent may only use
    // async-signal-safe calls (no heap allocation).
    std::vector<char*> argv;
    argv.reserve(command.size() + 1);
    for (const auto& arg : command) argv.push_back(const_cast<char*>(arg.c_str()));
    argv.push_back(nullptr);

    // O_CLOEXEC keeps concurrently spawned children from inheriting each
    // other's pipe ends, which would delay EOF on the parent's readers.
    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (pipe2(in_pipe, O_CLOEXEC) != 0 || pipe2(out_pipe, O_CLOEXEC) != 0 ||
        pipe2(err_pipe, O_CLOEXEC) != 0) {
        child.spawn_error = std::strerror(errno);
        return child;
    }
    pid_t pid = fork();
    if (pid < 0) {
        child.spawn_error = std::strerror(errno);
        return child;
    }
    if (pid == 0) {
        // dup2 clears O_CLOEXEC on the stdio descriptors
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0],
                       err_pipe[1]}) {
            ::close(fd);
        }
        if (workdir) {
            if (chdir(workdir->c_str()) != 0) _exit(127);
        }
        execvp(argv[0], argv.data());
        const char* msg = "exec failed\n";
        ssize_t ignored = write(STDERR_FILENO, msg, std::strlen(msg));
        (void)ignored;
        _exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    child.pid = pid;
    child.stdin_fd = in_pipe[1];
    child.stdout_fd = out_pipe[0];
    child.stderr_fd = err_pipe[0];
    return child;
}

void write_input_and_close(ChildProc& child, const json& input) {
    const std::string payload = input.dump();
    size_t off = 0;
    while (off < payload.size()) {
        ssize_t n = write(child.stdin_fd, payload.data() + off, payload.size() - off);
        if (n <= 0) break;  // child closed stdin early; not an error by itself
        off += static_cast<size_t>(n);
    }
    close_fd(child.stdin_fd);
}

int reap(pid_t pid) {
    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return -1;
}

void kill_and_reap(ChildProc& child) {
    if (child.pid > 0) {
        kill(child.pid, SIGKILL);
        reap(child.pid);
        child.pid = -1;
    }
    close_fd(child.stdin_fd);
    close_fd(child.stdout_fd);
    close_fd(child.stderr_fd);
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

UnaryOutcome run_subprocess_unary(const std::vector<std::string>& command, const json& input,
                                  double timeout_secs,
                                  const std::optional<std::filesystem::path>& workdir) {
    ChildProc child = spawn_child(command, workdir);
    if (!child.ok()) {
        return HandlerError{HandlerError::Kind::failed,
                            "failed to spawn handler: " + child.spawn_error};
    }
    write_input_and_close(child, input);

    const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_secs));
    std::string out, errbuf;
    bool err_truncated = false;
    bool out_open = true, err_open = true;
    char buf[4096];
    while (out_open || err_open) {
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - Clock::now());
        if (remaining.count() <= 0) {
            kill_and_reap(child);
            return HandlerError{HandlerError::Kind::timeout, timeout_message(timeout_secs)};
        }
        pollfd fds[2];
        nfds_t n = 0;
        if (out_open) fds[n++] = {child.stdout_fd, POLLIN, 0};
        if (err_open) fds[n++] = {child.stderr_fd, POLLIN, 0};
        int rc = poll(fds, n, static_cast<int>(std::min<long long>(remaining.count(), 200)));
        if (rc < 0 && errno != EINTR) break;
        for (nfds_t i = 0; i < n; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
            ssize_t got = read(fds[i].fd, buf, sizeof buf);
            if (fds[i].fd == child.stdout_fd) {
                if (got > 0) {
                    out.append(buf, static_cast<size_t>(got));
                } else {
                    close_fd(child.stdout_fd);
                    out_open = false;
                }
            } else {
                if (got > 0) {
                    append_capped(errbuf, buf, static_cast<size_t>(got), err_truncated);
                } else {
                    close_fd(child.stderr_fd);
                    err_open = false;
                }
            }
        }
    }
    int exit_code = reap(child.pid);
    child.pid = -1;
    close_fd(child.stdout_fd);
    close_fd(child.stderr_fd);
    if (exit_code != 0) {
        return HandlerError{HandlerError::Kind::failed,
                            "handler exited with code " + std::to_string(exit_code) + ": " +
                                stderr_tail(errbuf, err_truncated)};
    }
    const std::string body = trim(out);
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded()) {
        return HandlerError{HandlerError::Kind::bad_output,
                            "handler stdout is not a single JSON document"};
    }
    return parsed;
}

ChunkStream run_subprocess_streaming(const std::vector<std::string>& command,
                                     const json& input, double timeout_secs,
                                     const std::optional<std::filesystem::path>& workdir) {
    auto state = std::make_shared<ChunkStream::State>();
    state->timeout_secs = timeout_secs;
    state->deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_secs));

    std::thread([state, command, input, workdir] {
        ChildProc child = spawn_child(command, workdir);
        if (!child.ok()) {
            state->finish(HandlerError{HandlerError::Kind::failed,
                                       "failed to spawn handler: " + child.spawn_error});
            return;
        }
        bool already_abandoned = false;
        {
            std::lock_guard lock(state->m);
            if (state->abandoned) {
                already_abandoned = true;
            } else {
                state->child = child.pid;
            }
        }
        if (already_abandoned) {
            kill_and_reap(child);
            return;
        }
        write_input_and_close(child, input);

        std::string pending, errbuf;
        bool err_truncated = false;
        bool out_open = true, err_open = true;
        char buf[4096];
        std::optional<HandlerError> terminal;
        while (out_open || err_open) {
            {
                std::lock_guard lock(state->m);
                if (state->abandoned) {
                    break;
                }
            }
            auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                state->deadline - Clock::now());
            if (remaining.count() <= 0) {
                terminal = HandlerError{HandlerError::Kind::timeout,
                                        timeout_message(state->timeout_secs)};
                break;
            }
            pollfd fds[2];
            nfds_t n = 0;
            if (out_open) fds[n++] = {child.stdout_fd, POLLIN, 0};
            if (err_open) fds[n++] = {child.stderr_fd, POLLIN, 0};
            int rc = poll(fds, n,
                          static_cast<int>(std::min<long long>(remaining.count(), 100)));
            if (rc < 0 && errno != EINTR) break;
            for (nfds_t i = 0; i < n; ++i) {
                if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
                ssize_t got = read(fds[i].fd, buf, sizeof buf);
                if (fds[i].fd == child.stdout_fd) {
                    if (got > 0) {
                        pending.append(buf, static_cast<size_t>(got));
                        size_t nl;
                        while ((nl = pending.find('\n')) != std::string::npos) {
                            std::string line = trim(pending.substr(0, nl));
                            pending.erase(0, nl + 1);
                            if (line.empty()) continue;
                            json chunk = json::parse(line, nullptr, false);
                            if (chunk.is_discarded()) {
                                terminal = HandlerError{
                                    HandlerError::Kind::bad_output,
                                    "handler emitted a non-JSON chunk line"};
                                out_open = err_open = false;
                                break;
                            }
                            state->push(std::move(chunk));
                        }
                    } else {
                        close_fd(child.stdout_fd);
                        out_open = false;
                    }
                } else {
                    if (got > 0) {
                        append_capped(errbuf, buf, static_cast<size_t>(got), err_truncated);
                    } else {
                        close_fd(child.stderr_fd);
                        err_open = false;
                    }
                }
            }
            if (terminal) break;
        }

        {
            std::lock_guard lock(state->m);
            state->child = -1;
        }
        if (terminal || !(out_open == false && err_open == false)) {
            kill_and_reap(child);
            state->finish(terminal);
            return;
        }
        // trailing line without newline
        std::string line = trim(pending);
        if (!line.empty()) {
            json chunk = json::parse(line, nullptr, false);
            if (chunk.is_discarded()) {
                kill_and_reap(child);
                state->finish(HandlerError{HandlerError::Kind::bad_output,
                                           "handler emitted a non-JSON chunk line"});
                return;
            }
            state->push(std::move(chunk));
        }
        int exit_code = reap(child.pid);
        child.pid = -1;
        close_fd(child.stdin_fd);
        if (exit_code != 0) {
            state->finish(HandlerError{
                HandlerError::Kind::failed,
                "handler exited with code " + std::to_string(exit_code) + ": " +
                    stderr_tail(errbuf, err_truncated)});
        } else {
            state->finish(std::nullopt);
        }
    }).detach();

    return ChunkStream(state);
}

// ---------------------------------------------------------------------------
// In-process invocation

namespace {

struct UnaryState {
    std::mutex m;
    std::condition_variable cv;
    bool done = false;
    json result;
    std::optional<HandlerError> err;
};

}  // namespace

UnaryOutcome invoke_unary(const HandlerRegistry& registry, const HandlerBinding& binding,
                          const json& input, double timeout_secs,
                          const SchemaDoc* output_schema) {
    UnaryOutcome outcome = HandlerError{HandlerError::Kind::failed, "unreachable"};
    if (binding.kind == BindingKind::subprocess) {
        outcome = run_subprocess_unary(binding.command, input, timeout_secs, binding.workdir);
    } else if (binding.kind == BindingKind::in_process_streaming) {
        return HandlerError{HandlerError::Kind::failed, "binding is not unary-capable"};
    } else {
        const auto* entry = registry.find(binding.registry_key);
        if (!entry || !entry->unary) {
            return HandlerError{HandlerError::Kind::failed,
                                "unknown handler registry key '" + binding.registry_key + "'"};
        }
        auto state = std::make_shared<UnaryState>();
        UnaryHandler fn = entry->unary;
        std::thread([state, fn, input] {
            try {
                json r = fn(input);
                std::lock_guard lock(state->m);
                state->result = std::move(r);
                state->done = true;
            } catch (const std::exception& e) {
                std::lock_guard lock(state->m);
                state->err = HandlerError{HandlerError::Kind::failed, e.what()};
                state->done = true;
            }
            state->cv.notify_all();
        }).detach();

        std::unique_lock lock(state->m);
        const bool finished = state->cv.wait_for(
            lock, std::chrono::duration<double>(timeout_secs), [&] { return state->done; });
        if (!finished) {
            // the worker is abandoned; its result is dropped on arrival
            return HandlerError{HandlerError::Kind::timeout, timeout_message(timeout_secs)};
        }
        if (state->err) return *state->err;
        outcome = std::move(state->result);
    }

    if (output_schema) {
        if (auto* value = std::get_if<json>(&outcome)) {
            auto check = validate_against(output_schema->raw, *value);
            if (!check.ok()) {
                return HandlerError{HandlerError::Kind::bad_output,
                                    "handler output does not match the output schema: " +
                                        canonicalize(check.errors.to_json())};
            }
        }
    }
    return outcome;
}

namespace {

struct QueueSink : ChunkSink {
    std::shared_ptr<ChunkStream::State> state;
    explicit QueueSink(std::shared_ptr<ChunkStream::State> s) : state(std::move(s)) {}
    bool emit(json chunk) override { return state->push(std::move(chunk)); }
};

}  // namespace

ChunkStream invoke_streaming(const HandlerRegistry& registry, const HandlerBinding& binding,
                             const json& input, double timeout_secs) {
    if (binding.kind == BindingKind::subprocess) {
        return run_subprocess_streaming(binding.command, input, timeout_secs,
                                        binding.workdir);
    }
    auto state = std::make_shared<ChunkStream::State>();
    state->timeout_secs = timeout_secs;
    state->deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_secs));
    if (binding.kind == BindingKind::in_process_unary) {
        state->finish(
            HandlerError{HandlerError::Kind::failed, "binding is not streaming-capable"});
        return ChunkStream(state);
    }
    const auto* entry = registry.find(binding.registry_key);
    if (!entry || !entry->streaming) {
        state->finish(HandlerError{HandlerError::Kind::failed,
                                   "unknown handler registry key '" + binding.registry_key +
                                       "'"});
        return ChunkStream(state);
    }
    StreamingHandler fn = entry->streaming;
    std::thread([state, fn, input] {
        QueueSink sink(state);
        try {
            fn(input, sink);
            state->finish(std::nullopt);
        } catch (const std::exception& e) {
            state->finish(HandlerError{HandlerError::Kind::failed, e.what()});
        }
    }).detach();
    return ChunkStream(state);
}

// ---------------------------------------------------------------------------
// Edit overrides

std::optional<EditError> apply_edit_override(Skill& skill, const json& override_spec,
                                             const HandlerRegistry& registry) {
    if (!override_spec.is_object()) {
        return EditError{EditError::Kind::malformed, "override must be a JSON object"};
    }
    const bool has_key = override_spec.contains("registry_key");
    const bool has_cmd = override_spec.contains("command");
    if (has_key == has_cmd) {
        return EditError{EditError::Kind::malformed,
                         "override must carry exactly one of registry_key or command"};
    }
    HandlerBinding next;
    if (has_key) {
        if (!override_spec["registry_key"].is_string()) {
            return EditError{EditError::Kind::malformed, "registry_key must be a string"};
        }
        const std::string key = override_spec["registry_key"].get<std::string>();
        const auto* entry = registry.find(key);
        if (!entry) {
            return EditError{EditError::Kind::not_found,
                             "unknown handler registry key '" + key + "'"};
        }
        next.kind = entry->kind;
        next.registry_key = key;
    } else {
        if (!override_spec["command"].is_array() || override_spec["command"].empty()) {
            return EditError{EditError::Kind::malformed,
                             "command must be a non-empty array of strings"};
        }
        for (const auto& arg : override_spec["command"]) {
            if (!arg.is_string()) {
                return EditError{EditError::Kind::malformed,
                                 "command must be a non-empty array of strings"};
            }
            next.command.push_back(arg.get<std::string>());
        }
        next.kind = BindingKind::subprocess;
        next.command_streaming = override_spec.value("streaming", is_streaming(skill));
    }
    if (is_streaming(next) != is_streaming(skill)) {
        return EditError{EditError::Kind::kind_mismatch,
                         "override streaming kind does not match the skill"};
    }
    skill.set_edit_binding(std::move(next));
    return std::nullopt;
}

void clear_edit_override(Skill& skill) { skill.clear_edit_binding(); }

// ---------------------------------------------------------------------------
// Example self-tests

std::vector<ExampleReport> run_examples(const Skill& skill, const HandlerRegistry& registry) {
    std::vector<ExampleReport> reports;
    for (const auto& example : skill.examples) {
        ExampleReport report;
        report.file = example.source_file;
        auto validated = validate_input(skill.input_schema, example.input);
        if (!validated.ok()) {
            report.message = "example input fails the input schema: " +
                             canonicalize(validated.errors.to_json());
            reports.push_back(std::move(report));
            continue;
        }
        const HandlerBinding binding = skill.effective_binding();
        if (is_streaming(skill)) {
            if (!example.output.is_object() || !example.output.contains("chunks") ||
                !example.output["chunks"].is_array()) {
                report.message = "streaming example output must be {\"chunks\": [...]}";
                reports.push_back(std::move(report));
                continue;
            }
            ChunkStream stream = invoke_streaming(registry, binding, validated.value,
                                                  skill.meta.timeout_secs);
            json collected = json::array();
            json chunk;
            while (stream.next(chunk)) collected.push_back(chunk_to_string(chunk));
            if (stream.error()) {
                report.message = "handler error: " + stream.error()->message;
            } else if (collected != example.output["chunks"]) {
                report.message = "chunks mismatch: expected " +
                                 canonicalize(example.output["chunks"]) + ", got " +
                                 canonicalize(collected);
            } else {
                report.pass = true;
                report.message = "ok";
            }
        } else {
            UnaryOutcome outcome = invoke_unary(registry, binding, validated.value,
                                                skill.meta.timeout_secs, &skill.output_schema);
            if (auto* err = std::get_if<HandlerError>(&outcome)) {
                report.message = "handler error: " + err->message;
            } else {
                const json& got = std::get<json>(outcome);
                if (got != example.output) {
                    report.message = "output mismatch: expected " +
                                     canonicalize(example.output) + ", got " +
                                     canonicalize(got);
                } else {
                    report.pass = true;
                    report.message = "ok";
                }
            }
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace harness
