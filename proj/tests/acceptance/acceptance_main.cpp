// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: drives a real server over loopback HTTP and the MCP
// mount and checks the framework's end-to-end guarantees — transport
// parity, schema consistency, SSE grammar, timeouts, lifecycle, the
// loopback gate, the import corpus, and zero-per-skill-transport-code.
// Prints one PASS/FAIL line per criterion and exits nonzero on failure.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "harness/discovery.hpp"
#include "harness/lifecycle.hpp"
#include "harness/schema.hpp"
#include "harness/server.hpp"
#include "harness/sse.hpp"

#include "../support/test_util.hpp"

namespace fs = std::filesystem;
using harness::BindingKind;
using harness::ChunkSink;
using harness::HandlerRegistry;
using harness::HarnessServer;
using harness::LifecycleHooks;
using harness::ServerConfig;
using harness::Skill;
using harness::SseEvent;
using nlohmann::json;
using testutil::Client;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_secs(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Reporting

struct Criterion {
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (notes.size() < 12) notes.push_back(what);
        }
    }
};

struct Report {
    std::vector<Criterion> criteria;

    Criterion& open(std::string name) {
        criteria.push_back(Criterion{std::move(name)});
        return criteria.back();
    }

    int finish() const {
        int failures = 0;
        for (const auto& c : criteria) {
            std::printf("%s  %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str());
            for (const auto& note : c.notes) std::printf("        - %s\n", note.c_str());
            if (!c.pass) ++failures;
        }
        std::printf("%zu/%zu acceptance criteria passed\n",
                    criteria.size() - static_cast<size_t>(failures), criteria.size());
        return failures == 0 ? 0 : 1;
    }
};

// ---------------------------------------------------------------------------
// Fixture plumbing

std::shared_ptr<Skill> make_inproc_skill(const std::string& name, bool streaming,
                                         json input_schema, double timeout_secs) {
    auto skill = std::make_shared<Skill>();
    skill->name = name;
    skill->meta.description = "acceptance helper: " + name;
    skill->meta.timeout_secs = timeout_secs;
    skill->input_schema =
        harness::SchemaDoc{std::move(input_schema), name, harness::SchemaRole::input};
    skill->output_schema =
        harness::SchemaDoc{json{{"type", "object"}}, name, harness::SchemaRole::output};
    skill->binding.kind =
        streaming ? BindingKind::in_process_streaming : BindingKind::in_process_unary;
    skill->binding.registry_key = name;
    return skill;
}

/// The main server under test: the six bundled skills, the subprocess
/// sleep fixture, and a few registered in-process helpers; edit endpoints
/// enabled (loopback only).
struct TestRig {
    std::shared_ptr<HandlerRegistry> registry = std::make_shared<HandlerRegistry>();
    std::vector<std::shared_ptr<Skill>> skills;
    std::unique_ptr<HarnessServer> server;
    int port = 0;

    TestRig() {
        registry->add_unary("echo_v2", [](const json& input) {
            json out = input;
            out["text"] = input.value("text", "") + " (v2)";
            return out;
        });
        registry->add_unary("sleep_local", [](const json&) {
            std::this_thread::sleep_for(std::chrono::seconds(2));
            return json::object();
        });
        registry->add_streaming("rand_stream", [](const json& input, ChunkSink& sink) {
            const int n = input.value("n", 0);
            for (int i = 0; i < n; ++i) sink.emit(json("c" + std::to_string(i)));
            if (input.value("fail", false)) throw std::runtime_error("injected fault");
        });
        registry->add_unary("rand_unary", [](const json& input) -> json {
            if (input.value("fail", false)) throw std::runtime_error("injected fault");
            return json{{"ok", true}};
        });

        auto result = harness::discover(
            std::vector<fs::path>{testutil::repo_skills_dir(),
                                  testutil::fixtures_dir() / "extra"},
            *registry);
        skills = result.skills;

        const json helper_schema = json::parse(R"({
            "type": "object",
            "properties": {"n": {"type": "integer"}, "fail": {"type": "boolean"}}
        })");
        skills.push_back(make_inproc_skill("rand_stream", true, helper_schema, 10));
        skills.push_back(make_inproc_skill("rand_unary", false, helper_schema, 10));
        skills.push_back(
            make_inproc_skill("sleep_local", false, json{{"type", "object"}}, 1));
        std::sort(skills.begin(), skills.end(),
                  [](const auto& a, const auto& b) { return a->name < b->name; });

        ServerConfig config;
        config.enable_edit_endpoints = true;
        server = std::make_unique<HarnessServer>(config, skills, registry);
        port = server->start_background();
    }
    ~TestRig() { server->stop(); }
};

std::vector<SseEvent> must_parse_sse(Criterion& c, const Client::Response& res,
                                     const std::string& label) {
    c.require(res.status == 200, label + ": expected 200, got " +
                                     std::to_string(res.status));
    auto events = harness::parse_sse_body(res.body);
    c.require(events.has_value(), label + ": body is not well-framed SSE");
    return events.value_or(std::vector<SseEvent>{});
}

std::vector<std::string> split_on_newline(const std::string& text) {
    return testutil::split_lines(text);
}

// Random valid inputs per streaming fixture.
json random_input_for(const std::string& skill, std::mt19937& rng) {
    auto word = [&rng](int min_len) {
        const int n = min_len + static_cast<int>(rng() % 6);
        std::string w;
        for (int i = 0; i < n; ++i) w.push_back('a' + static_cast<char>(rng() % 26));
        return w;
    };
    if (skill == "summarize") {
        std::string text;
        const int sentences = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < sentences; ++i) text += word(3) + " " + word(3) + ". ";
        return json{{"text", text},
                    {"max_length", 40 + static_cast<int>(rng() % 200)}};
    }
    if (skill == "vector_norm") {
        json values = json::array();
        const int n = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < n; ++i) {
            values.push_back(static_cast<double>(rng() % 2000) / 100.0 - 10.0);
        }
        return json{{"values", values}};
    }
    // translate
    std::string text = word(2);
    const int extra = static_cast<int>(rng() % 4);
    for (int i = 0; i < extra; ++i) text += " " + word(2);
    const char* langs[] = {"fr", "de", "es"};
    return json{{"text", text}, {"target_lang", langs[rng() % 3]}};
}

// ---------------------------------------------------------------------------
// Criteria

void criterion_feature_matrix(Report& report, TestRig& rig) {
    auto& c = report.open("1. dual-transport feature matrix on the bundled skills");
    Client client(rig.port);

    // HTTP endpoint per skill
    auto http = client.post("/skills/echo", json{{"text", "x"}}, "application/json");
    c.require(http.status == 200 && json::parse(http.body) == json{{"text", "x"}},
              "HTTP endpoint: echo did not round-trip");

    // MCP tool per skill
    json call = client.rpc(
        "/mcp", {{"jsonrpc", "2.0"},
                 {"id", 1},
                 {"method", "tools/call"},
                 {"params", {{"name", "echo"}, {"arguments", {{"text", "x"}}}}}});
    c.require(call["result"]["isError"] == false &&
                  call["result"]["structuredContent"] == json{{"text", "x"}},
              "MCP tool: echo call failed");

    // OpenAPI document
    auto openapi = client.get("/openapi.json");
    json doc = openapi.status == 200 ? json::parse(openapi.body) : json::object();
    c.require(openapi.status == 200 && doc["openapi"] == "3.1.0" &&
                  doc["paths"].contains("/skills/summarize"),
              "OpenAPI: document missing or incomplete");

    // SSE streaming
    auto sse = client.post("/skills/vector_norm", json{{"values", {3, 4}}});
    auto events = must_parse_sse(c, sse, "SSE streaming");
    c.require(events.size() == 4 && events[0].type == SseEvent::Type::chunk &&
                  events.back().type == SseEvent::Type::done,
              "SSE streaming: vector_norm grammar mismatch");

    // JSON fallback on the same route
    auto fallback =
        client.post("/skills/vector_norm", json{{"values", {3, 4}}}, "application/json");
    c.require(fallback.status == 200 &&
                  json::parse(fallback.body)["chunks"] ==
                      json::array({"partial: 9", "partial: 25", "norm: 5"}),
              "JSON fallback: chunks mismatch");

    // Content negotiation chooses by Accept on one route
    c.require(sse.content_type.find("text/event-stream") == 0 &&
                  fallback.content_type.find("application/json") == 0,
              "content negotiation: content types did not follow Accept");

    // Per-skill timeout config honored (sleep_local declares 1 s)
    auto start = Clock::now();
    auto timed = client.post("/skills/sleep_local", json::object(), "application/json");
    c.require(timed.status == 504 && elapsed_secs(start) < 1.8,
              "per-skill timeout: expected a prompt 504");

    // Skill-level MCP toggle
    json tools = client.rpc(
        "/mcp", {{"jsonrpc", "2.0"}, {"id", 2}, {"method", "tools/list"}})["result"]
                     ["tools"];
    bool classify_listed = false;
    for (const auto& tool : tools) classify_listed |= (tool["name"] == "classify");
    auto classify = client.post("/skills/classify", json{{"text", "a good day"}},
                                "application/json");
    c.require(!classify_listed && classify.status == 200,
              "MCP toggle: classify should be HTTP-only");

    // SKILL.md compatibility feeds metadata
    auto listing = client.get("/skills");
    bool greet_described = false;
    for (const auto& entry : json::parse(listing.body)) {
        if (entry["name"] == "greet") {
            greet_described = (entry["description"] == "Greet someone by name");
        }
    }
    c.require(greet_described, "SKILL.md compatibility: greet description not merged");

    // Single-process deploy: every surface answered on one port already.
    auto docs = client.get("/docs");
    c.require(docs.status == 200, "single process: /docs missing on the shared port");
}

void criterion_schema_consistency(Report& report, TestRig& rig) {
    auto& c = report.open("2. MCP and OpenAPI schemas are canonically byte-equal");
    Client client(rig.port);
    json doc = json::parse(client.get("/openapi.json").body);
    json tools = client.rpc(
        "/mcp", {{"jsonrpc", "2.0"}, {"id", 1}, {"method", "tools/list"}})["result"]
                     ["tools"];
    c.require(!tools.empty(), "tools/list returned no tools");
    for (const auto& tool : tools) {
        const std::string name = tool["name"];
        const std::string path = "/skills/" + name;
        if (!doc["paths"].contains(path)) {
            c.require(false, name + ": no OpenAPI path");
            continue;
        }
        const json& body_schema =
            doc["paths"][path]["post"]["requestBody"]["content"]["application/json"]
               ["schema"];
        c.require(harness::canonicalize(tool["inputSchema"]) ==
                      harness::canonicalize(body_schema),
                  name + ": canonical schema bytes differ between transports");
    }
}

void criterion_sse_grammar(Report& report, TestRig& rig) {
    auto& c = report.open("3. SSE golden bytes and randomized event grammar");
    Client client(rig.port);

    auto unary = client.post("/skills/echo", json{{"text", "x"}});
    c.require(unary.body == testutil::read_file(testutil::golden_dir() / "echo_unary.sse"),
              "echo response does not match the golden byte recording");

    auto streaming = client.post("/skills/vector_norm", json{{"values", {3, 4}}});
    c.require(streaming.body ==
                  testutil::read_file(testutil::golden_dir() / "vector_norm_stream.sse"),
              "vector_norm response does not match the golden byte recording");

    std::mt19937 rng(4242);
    for (int run = 0; run < 100; ++run) {
        const json input = {{"n", static_cast<int>(rng() % 6)},
                            {"fail", (rng() % 2) == 0}};
        auto res = client.post("/skills/rand_stream", input);
        auto events = must_parse_sse(c, res, "rand_stream run " + std::to_string(run));
        if (events.empty()) continue;
        bool grammar_ok = true;
        for (size_t i = 0; i + 1 < events.size(); ++i) {
            grammar_ok &= events[i].type == SseEvent::Type::chunk;
        }
        const auto terminal = events.back().type;
        grammar_ok &= terminal == SseEvent::Type::done || terminal == SseEvent::Type::error;
        grammar_ok &= (terminal == SseEvent::Type::error) == input["fail"].get<bool>();
        grammar_ok &=
            static_cast<int>(events.size()) - 1 == input["n"].get<int>();
        c.require(grammar_ok, "rand_stream run " + std::to_string(run) +
                                  ": grammar violated for input " + input.dump());
        if (!c.pass) break;
    }
    for (int run = 0; run < 100; ++run) {
        const json input = {{"fail", (rng() % 2) == 0}};
        auto res = client.post("/skills/rand_unary", input);
        auto events = must_parse_sse(c, res, "rand_unary run " + std::to_string(run));
        if (events.empty()) continue;
        const bool fail = input["fail"].get<bool>();
        bool grammar_ok;
        if (fail) {
            grammar_ok = events.size() == 1 && events[0].type == SseEvent::Type::error;
        } else {
            grammar_ok = events.size() == 2 &&
                         events[0].type == SseEvent::Type::result &&
                         events[1].type == SseEvent::Type::done;
        }
        c.require(grammar_ok, "rand_unary run " + std::to_string(run) +
                                  ": grammar violated for input " + input.dump());
        if (!c.pass) break;
    }
}

void criterion_transport_agreement(Report& report, TestRig& rig) {
    auto& c = report.open("4. streaming transports agree chunk for chunk");
    const std::vector<std::string> fixtures = {"summarize", "translate", "vector_norm"};
    std::mt19937 rng(777);

    for (const auto& name : fixtures) {
        std::vector<json> inputs;
        for (int i = 0; i < 50; ++i) inputs.push_back(random_input_for(name, rng));

        std::mutex mu;
        std::vector<std::string> problems;
        const int workers = 10;
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                Client client(rig.port);
                for (size_t i = w; i < inputs.size(); i += workers) {
                    const json& input = inputs[i];
                    const std::string label =
                        name + "[" + std::to_string(i) + "] input " + input.dump();

                    auto sse = client.post("/skills/" + name, input);
                    auto events = harness::parse_sse_body(sse.body);
                    auto buffered =
                        client.post("/skills/" + name, input, "application/json");
                    json call = client.rpc(
                        "/mcp",
                        {{"jsonrpc", "2.0"},
                         {"id", 1},
                         {"method", "tools/call"},
                         {"params", {{"name", name}, {"arguments", input}}}});

                    std::string problem;
                    if (!events || sse.status != 200) {
                        problem = label + ": bad SSE response";
                    } else if (buffered.status != 200) {
                        problem = label + ": bad JSON response";
                    } else if (call["result"]["isError"] != false) {
                        problem = label + ": MCP call errored";
                    } else {
                        std::vector<std::string> sse_chunks;
                        for (const auto& e : *events) {
                            if (e.type == SseEvent::Type::chunk) {
                                sse_chunks.push_back(harness::chunk_to_string(e.data));
                            }
                        }
                        std::vector<std::string> json_chunks;
                        const json buffered_body = json::parse(buffered.body);
                        for (const auto& chunk : buffered_body["chunks"]) {
                            json_chunks.push_back(chunk.get<std::string>());
                        }
                        auto mcp_chunks = split_on_newline(
                            call["result"]["content"][0]["text"].get<std::string>());
                        if (sse_chunks != json_chunks) {
                            problem = label + ": SSE vs JSON chunk mismatch";
                        } else if (json_chunks != mcp_chunks) {
                            problem = label + ": JSON vs MCP chunk mismatch";
                        }
                    }
                    if (!problem.empty()) {
                        std::lock_guard<std::mutex> lock(mu);
                        problems.push_back(problem);
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& p : problems) c.require(false, p);
    }
}

void criterion_validation_before_branch(Report& report, TestRig& rig) {
    auto& c = report.open("5. invalid bodies are JSON 422 under every Accept value");
    Client client(rig.port);
    for (const std::string accept : {"", "application/json", "text/event-stream"}) {
        const std::string label =
            accept.empty() ? "absent Accept" : "Accept: " + accept;
        auto res = client.post("/skills/echo", json{{"text", 7}}, accept);
        c.require(res.status == 422, label + ": status " + std::to_string(res.status));
        c.require(res.content_type.find("application/json") == 0,
                  label + ": content type " + res.content_type);
        json body = json::parse(res.body, nullptr, false);
        c.require(!body.is_discarded() && body.contains("detail") &&
                      body["detail"].is_array(),
                  label + ": body is not the JSON detail shape");
    }
}

void criterion_timeouts(Report& report, TestRig& rig) {
    auto& c = report.open("6. timeouts answer promptly and reap subprocess children");
    Client client(rig.port);

    for (const std::string name : {"sleep_local", "sleep_proc"}) {
        auto start = Clock::now();
        auto buffered = client.post("/skills/" + name, json::object(), "application/json");
        const double json_elapsed = elapsed_secs(start);
        c.require(buffered.status == 504,
                  name + " JSON mode: status " + std::to_string(buffered.status));
        json body = json::parse(buffered.body, nullptr, false);
        c.require(!body.is_discarded() &&
                      body.value("detail", "") == "handler timeout after 1s",
                  name + " JSON mode: unexpected detail " + buffered.body);
        c.require(json_elapsed < 1.5, name + " JSON mode: took " +
                                          std::to_string(json_elapsed) + "s");

        start = Clock::now();
        auto sse = client.post("/skills/" + name, json::object());
        const double sse_elapsed = elapsed_secs(start);
        auto events = must_parse_sse(c, sse, name + " SSE mode");
        c.require(events.size() == 1 && events[0].type == SseEvent::Type::error,
                  name + " SSE mode: expected a single error event");
        if (!events.empty()) {
            c.require(events[0].data.value("detail", "") == "handler timeout after 1s",
                      name + " SSE mode: unexpected error payload");
        }
        c.require(sse_elapsed < 1.5,
                  name + " SSE mode: took " + std::to_string(sse_elapsed) + "s");
    }

    std::this_thread::sleep_for(std::chrono::seconds(1));
    auto pgrep = testutil::run_command("pgrep -f 'harness-sleep-proc-[m]arker'; true");
    c.require(pgrep.output.empty(),
              "sleep_proc child still alive 1s after completion: " + pgrep.output);
}

void criterion_lifecycle(Report& report) {
    auto& c = report.open("7. lifecycle hooks nest and unwind in order");
    std::vector<std::string> order;
    auto record = [&order](const char* tag) {
        return [&order, tag] { order.emplace_back(tag); };
    };

    auto controller = harness::compose_lifecycle(
        LifecycleHooks{record("mcp_up"), record("mcp_down")},
        LifecycleHooks{record("user_up"), record("user_down")});
    controller.start();
    controller.stop();
    c.require(order == std::vector<std::string>{"mcp_up", "user_up", "user_down",
                                                "mcp_down"},
              "healthy path recorded an unexpected order");

    order.clear();
    auto failing = harness::compose_lifecycle(
        LifecycleHooks{record("mcp_up"), record("mcp_down")},
        LifecycleHooks{[&order] {
                           order.emplace_back("user_up");
                           throw std::runtime_error("startup refused");
                       },
                       record("user_down")});
    bool threw = false;
    try {
        failing.start();
    } catch (const std::runtime_error&) {
        threw = true;
    }
    c.require(threw, "user startup failure did not propagate");
    c.require(order == std::vector<std::string>{"mcp_up", "user_up", "mcp_down"},
              "failure path recorded an unexpected order");
}

void criterion_loopback_gate(Report& report, TestRig& rig) {
    auto& c = report.open("8. edit endpoints: loopback-only startup and hot swap");

    auto refused = testutil::run_command(
        "'" + testutil::cli_bin() + "' serve --host 0.0.0.0 --enable-edit-endpoints" +
        " --skills-dir '" + testutil::repo_skills_dir().string() + "'");
    c.require(refused.exit_code == 2,
              "non-loopback serve exited " + std::to_string(refused.exit_code));
    c.require(refused.output.find("loopback") != std::string::npos,
              "refusal did not explain the loopback rule");

    Client client(rig.port);
    auto before = client.post("/skills/echo", json{{"text", "x"}}, "application/json");
    c.require(json::parse(before.body) == json{{"text", "x"}}, "baseline echo failed");

    auto swap = client.post("/skills/echo/edit", json{{"registry_key", "echo_v2"}});
    c.require(swap.status == 200, "swap returned " + std::to_string(swap.status));
    auto swapped = client.post("/skills/echo", json{{"text", "x"}}, "application/json");
    c.require(json::parse(swapped.body) == json{{"text", "x (v2)"}},
              "override behavior not observed after swap");

    auto cleared = client.post("/skills/echo/edit", json{{"clear", true}});
    c.require(cleared.status == 200, "clear returned " + std::to_string(cleared.status));
    auto after = client.post("/skills/echo", json{{"text", "x"}}, "application/json");
    c.require(json::parse(after.body) == json{{"text", "x"}},
              "original behavior not restored after clear");
}

void criterion_compat_corpus(Report& report) {
    auto& c = report.open("9. SKILL.md corpus imports with the metadata priority chain");
    testutil::TempDir tmp("acceptance_corpus");
    const fs::path project = tmp.path() / "imported";

    auto init = testutil::run_command(
        "'" + testutil::cli_bin() + "' init '" + project.string() + "' --skills-dir '" +
        (testutil::fixtures_dir() / "compat_corpus").string() + "'");
    c.require(init.exit_code == 0, "import exited " + std::to_string(init.exit_code));
    c.require(init.output.find("WARNING") != std::string::npos,
              "schema-less folder import did not warn about the stub models.json");

    HandlerRegistry registry;
    registry.add_unary("rank3_registry", [](const json& input) { return input; },
                       "From registry");
    auto result = harness::discover(project / "skills", registry);
    c.require(result.skills.size() == 6, "expected 6 imported skills, got " +
                                             std::to_string(result.skills.size()));

    auto description_of = [&result](const std::string& name) -> std::string {
        for (const auto& skill : result.skills) {
            if (skill->name == name) return skill->meta.description;
        }
        return "<missing skill>";
    };
    c.require(description_of("rank1_toml") == "From manifest",
              "manifest description did not win: " + description_of("rank1_toml"));
    c.require(description_of("rank2_front") == "From front matter",
              "front-matter description did not win: " + description_of("rank2_front"));
    c.require(description_of("rank3_registry") == "From registry",
              "registry description did not win: " + description_of("rank3_registry"));
    c.require(description_of("rank4_folder") == "rank4_folder",
              "folder-name fallback missing: " + description_of("rank4_folder"));

    for (const auto& skill : result.skills) {
        if (skill->name == "dash_tags") {
            c.require(skill->meta.tags == std::vector<std::string>{"imported", "sample"},
                      "dash-list tags were not merged");
        }
    }
    c.require(fs::exists(project / "skills" / "no_models" / "models.json"),
              "stub models.json was not written for the schema-less folder");
}

void criterion_zero_transport_code(Report& report) {
    auto& c = report.open("10. skill folders carry no transport code; new folders just appear");

    for (const auto& entry : fs::directory_iterator(testutil::repo_skills_dir())) {
        if (!entry.is_directory()) continue;
        const std::string skill = entry.path().filename().string();
        for (const auto& file : fs::directory_iterator(entry.path())) {
            const std::string base = file.path().filename().string();
            bool allowed = false;
            if (file.is_directory()) {
                allowed = base == "defaults" || base == "examples";
                if (allowed) {
                    for (const auto& inner : fs::directory_iterator(file.path())) {
                        const std::string name = inner.path().filename().string();
                        const bool json_file =
                            name.size() > 5 &&
                            name.compare(name.size() - 5, 5, ".json") == 0;
                        c.require(inner.is_regular_file() && json_file,
                                  skill + "/" + base + "/" + name +
                                      ": unexpected entry in a skill folder");
                    }
                }
            } else {
                allowed = base == "models.json" || base == "skill.toml" ||
                          base == "SKILL.md";
            }
            c.require(allowed, skill + "/" + base + ": not part of the declared layout");
        }
    }

    // A seventh skill dropped into a fresh directory appears on both
    // transports after a restart, with no other file touched.
    testutil::TempDir extra("acceptance_seventh");
    const fs::path seventh = extra.path() / "reverse";
    testutil::write_file(seventh / "models.json", R"({
        "input": {"type": "object", "properties": {"text": {"type": "string"}},
                  "required": ["text"]},
        "output": {"type": "object", "properties": {"text": {"type": "string"}},
                   "required": ["text"]}
    })");
    testutil::write_file(
        seventh / "skill.toml",
        "[skill]\ndescription = \"Reverse the input text\"\n\n[handler]\n"
        "command = [\"python3\", \"-c\", \"import sys,json; i=json.load(sys.stdin); "
        "print(json.dumps({'text': i['text'][::-1]}))\"]\n");

    auto registry = std::make_shared<HandlerRegistry>();
    auto result = harness::discover(
        std::vector<fs::path>{testutil::repo_skills_dir(), extra.path()}, *registry);
    HarnessServer server(ServerConfig{}, result.skills, registry);
    int port = server.start_background();
    Client client(port);

    json listing = json::parse(client.get("/skills").body);
    bool listed = false;
    for (const auto& entry : listing) listed |= (entry["name"] == "reverse");
    c.require(listing.size() == 7 && listed, "seventh skill missing from /skills");

    auto http = client.post("/skills/reverse", json{{"text", "abc"}}, "application/json");
    c.require(http.status == 200 && json::parse(http.body) == json{{"text", "cba"}},
              "seventh skill not callable over HTTP");

    json tools = client.rpc(
        "/mcp", {{"jsonrpc", "2.0"}, {"id", 1}, {"method", "tools/list"}})["result"]
                     ["tools"];
    bool tool_listed = false;
    for (const auto& tool : tools) tool_listed |= (tool["name"] == "reverse");
    c.require(tool_listed, "seventh skill missing from tools/list");

    json call = client.rpc(
        "/mcp", {{"jsonrpc", "2.0"},
                 {"id", 2},
                 {"method", "tools/call"},
                 {"params", {{"name", "reverse"}, {"arguments", {{"text", "abc"}}}}}});
    c.require(call["result"]["isError"] == false &&
                  call["result"]["structuredContent"] == json{{"text", "cba"}},
              "seventh skill not callable over MCP");
    server.stop();
}

}  // namespace

int main() {
    const auto started = Clock::now();
    Report report;
    {
        TestRig rig;
        criterion_feature_matrix(report, rig);
        criterion_schema_consistency(report, rig);
        criterion_sse_grammar(report, rig);
        criterion_transport_agreement(report, rig);
        criterion_validation_before_branch(report, rig);
        criterion_timeouts(report, rig);
        criterion_lifecycle(report);
        criterion_loopback_gate(report, rig);
        criterion_compat_corpus(report);
        criterion_zero_transport_code(report);
    }
    const int rc = report.finish();
    std::printf("acceptance wall time: %.1fs\n", elapsed_secs(started));
    return rc;
}
