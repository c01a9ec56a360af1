#include <doctest.h>

#include <httplib.h>

#include <cstdlib>
#include <random>
#include <thread>

#include "rcs/agent/app_agent.hpp"
#include "rcs/agent/host_agent.hpp"
#include "rcs/core/digest.hpp"
#include "rcs/core/serialize.hpp"
#include "rcs/error.hpp"
#include "rcs/llm/backend.hpp"
#include "rcs/llm/decision.hpp"
#include "rcs/llm/policies.hpp"
#include "rcs/llm/prompt.hpp"
#include "rcs/llm/retry.hpp"
#include "rcs/sim/robot_sim.hpp"
#include "test_support.hpp"

using namespace rcs;
using namespace rcs::llm;
using nlohmann::json;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::Io;
}

PromptTemplate host_tmpl() { return PromptTemplate::load(rcs::testing::template_dir() / "host_agent.tmpl"); }
PromptTemplate app_tmpl() { return PromptTemplate::load(rcs::testing::template_dir() / "app_agent.tmpl"); }

Prompt host_prompt(const std::string& request, const sim::WorldState& w) {
    return agent::build_host_prompt(host_tmpl(), make_request(request, "t"), sim::render_camera(w),
                                    sim::read_sensors(w), MemoryLog{});
}

Prompt app_prompt(const std::string& request, const GlobalPlan& plan, const sim::WorldState& w,
                  const MemoryLog& memory = {}) {
    return agent::build_app_prompt(app_tmpl(), make_request(request, "t"), plan, sim::render_camera(w),
                                   sim::read_sensors(w), memory);
}

std::string app_json(const std::string& status, const std::optional<json>& command = std::nullopt) {
    json j{{"observation", "o"}, {"comment", "c"}, {"status", status}};
    if (command) j["command"] = *command;
    return j.dump();
}

}  // namespace

TEST_CASE("replay backend serves in order then runs out") {
    ReplayBackend b({"a", "b", "c"});
    Prompt p;
    CHECK(b.complete(p) == "a");
    CHECK(b.complete(p) == "b");
    CHECK(b.complete(p) == "c");
    CHECK(b.remaining() == 0);
    CHECK(code_of([&] { b.complete(p); }) == ErrorCode::ReplayExhausted);
}

TEST_CASE("replay line encoding") {
    for (const std::string s : {"plain text", "{\"a\": 1}", "multi\nline", "\"quoted\"", "  padded  "}) {
        const auto lines = parse_replay_lines(encode_replay_line(s) + "\n");
        REQUIRE(lines.size() == 1);
        CHECK(lines[0] == s);
    }
    const std::string rec = json{{"record", "round"}, {"raw_completions", {"x", "y"}}}.dump();
    CHECK(parse_replay_lines(rec + "\n\n" + "z\n") == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("unknown scripted policy") {
    CHECK(code_of([] { ScriptedBackend b("nope"); }) == ErrorCode::PolicyUnknown);
    CHECK(scripted_policy_ids().size() == 3);
}

TEST_CASE("oracle rotates twice on the spot") {
    const std::string req = "Rotate twice on the spot";
    auto w = rcs::testing::empty_world();
    ScriptedBackend oracle("oracle");
    auto host = parse_host_decision(oracle.complete(host_prompt(req, w)));
    bool mentions_rotation = false;
    for (const auto& s : host.global_plan.steps)
        if (s.find("otat") != std::string::npos || s.find("360") != std::string::npos) mentions_rotation = true;
    CHECK(mentions_rotation);

    auto app = parse_app_decision(oracle.complete(app_prompt(req, host.global_plan, w)));
    REQUIRE(app.command.has_value());
    const bool full_turn = *app.command == Command{CarLeft{360}};
    const bool half_turn = *app.command == Command{CarLeft{180}};
    CHECK((full_turn || half_turn));
}

TEST_CASE("oracle moves forward on a clear path") {
    auto w = rcs::testing::empty_world();
    ScriptedBackend oracle("oracle");
    const std::string req = "Drive ahead a little";
    auto plan = make_plan({"Move forward 0.5 meters", "Stop"});
    auto app = parse_app_decision(oracle.complete(app_prompt(req, plan, w)));
    CHECK(app.status == Status::Continue);
    REQUIRE(app.command.has_value());
    CHECK(std::holds_alternative<CarForward>(*app.command));
}

TEST_CASE("http backend against an unreachable endpoint") {
    HttpChatBackend b(HttpChatConfig{"http://127.0.0.1:1/v1/chat/completions", "m", 2.0, "", false}, 0.0);
    CHECK(code_of([&] { b.complete(Prompt{"sys", {}, {Block{BlockKind::Request, "hi", "hi", {}}}}); }) ==
          ErrorCode::Transport);
    HttpChatBackend bad(HttpChatConfig{"not a url", "m", 2.0, "", false}, 0.0);
    CHECK(code_of([&] { bad.complete(Prompt{}); }) == ErrorCode::Transport);
}

TEST_CASE("http backend against a local chat server") {
    httplib::Server server;
    json seen;
    std::string auth;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen = json::parse(req.body);
        auth = req.get_header_value("Authorization");
        json reply{{"choices", {{{"message", {{"role", "assistant"}, {"content", "hello back"}}}}}}};
        res.set_content(reply.dump(), "application/json");
    });
    server.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
        res.status = 500;
        res.set_content("oops", "text/plain");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    ::setenv("RCS_TEST_KEY", "sekret", 1);
    const std::string base = "http://127.0.0.1:" + std::to_string(port);
    HttpChatBackend b(HttpChatConfig{base + "/v1/chat/completions", "gpt-test", 5.0, "RCS_TEST_KEY", true}, 0.0);
    Prompt p{"system text", {FewShot{"in", "out"}}, {Block{BlockKind::Request, "do it", "do it", {}}}};
    p.user_blocks.push_back(Block{BlockKind::Observation, "obs", "obs", std::vector<std::uint8_t>{1, 2, 3}});
    CHECK(b.complete(p) == "hello back");
    CHECK(seen["model"] == "gpt-test");
    CHECK(seen["temperature"] == 0.0);
    CHECK(seen["messages"][0]["role"] == "system");
    CHECK(seen["messages"][1]["content"] == "in");
    CHECK(seen["messages"][2]["content"] == "out");
    CHECK(seen["messages"].back()["role"] == "user");
    CHECK(seen["messages"].back().dump().find("data:image/png;base64,") != std::string::npos);
    CHECK(auth == "Bearer sekret");

    HttpChatBackend text_only(HttpChatConfig{base + "/v1/chat/completions", "m", 5.0, "", false}, 0.0);
    CHECK(text_only.request_body(p).dump().find("image_url") == std::string::npos);

    HttpChatBackend broken(HttpChatConfig{base + "/broken", "m", 5.0, "", false}, 0.0);
    CHECK(code_of([&] { broken.complete(p); }) == ErrorCode::Transport);

    server.stop();
    t.join();
}

TEST_CASE("parse_host_decision") {
    auto d = parse_host_decision(
        R"({"observation":"hallway","thoughts":"go forward","plan":["move forward 1m"],"comment":"starting"})");
    CHECK(d.global_plan.steps == std::vector<std::string>{"move forward 1m"});
    CHECK(d.observation_desc == "hallway");
    CHECK(code_of([] { parse_host_decision(R"({"observation":"a","thoughts":"b","comment":"c"})"); }) ==
          ErrorCode::Malformed);
    CHECK(code_of([] {
              parse_host_decision(R"({"observation":"a","thoughts":"b","plan":[],"comment":"c"})");
          }) == ErrorCode::Malformed);
    CHECK(code_of([] { parse_host_decision("no braces here"); }) == ErrorCode::Malformed);

    auto wrapped = parse_host_decision(
        "Sure! Here you go:\n```json\n{\"observation\":\"x\",\"thoughts\":\"y\",\"plan\":[\"a\",\"b\"],"
        "\"comment\":\"z\"}\n```\nThanks");
    CHECK(wrapped.global_plan.steps.size() == 2);
}

TEST_CASE("parse_app_decision") {
    auto d = parse_app_decision(
        R"({"observation":"box ahead","comment":"approaching","command":{"name":"car_forward","args":{"distance":0.5}},"status":"CONTINUE"})");
    CHECK(d.status == Status::Continue);
    REQUIRE(d.command.has_value());
    CHECK(*d.command == Command{CarForward{0.5}});

    auto f = parse_app_decision(R"({"observation":"done","comment":"request complete","status":"FINISH"})");
    CHECK(f.status == Status::Finish);
    CHECK_FALSE(f.command.has_value());

    CHECK(code_of([] {
              parse_app_decision(R"({"observation":"o","comment":"c","command":{"name":"fly"},"status":"CONTINUE"})");
          }) == ErrorCode::UnknownCommand);
    CHECK(code_of([] { parse_app_decision(app_json("CONTINUE")); }) == ErrorCode::Malformed);
    CHECK(code_of([] { parse_app_decision(app_json("MAYBE")); }) == ErrorCode::UnknownStatus);
}

TEST_CASE("decision round trip") {
    AppDecision a{"obs", "cmt", Command{CarRight{30}}, Status::Continue};
    CHECK(parse_app_decision(app_decision_to_json(a).dump()) == a);
    AppDecision f{"obs", "done", std::nullopt, Status::Finish};
    CHECK(parse_app_decision(app_decision_to_json(f).dump()) == f);
    HostDecision h{"o", "t", make_plan({"one", "two"}), "c"};
    CHECK(parse_host_decision(host_decision_to_json(h).dump()) == h);
}

TEST_CASE("with_retry counts attempts") {
    int calls = 0;
    CHECK(with_retry([&] { ++calls; return 1; }, 3) == 1);
    CHECK(calls == 1);

    calls = 0;
    CHECK(with_retry(
              [&] {
                  if (++calls < 3) throw Error(ErrorCode::Malformed, "bad");
                  return 7;
              },
              3) == 7);
    CHECK(calls == 3);

    calls = 0;
    CHECK(code_of([&] {
              with_retry(
                  [&]() -> int {
                      ++calls;
                      throw Error(ErrorCode::Malformed, "bad");
                  },
                  2);
          }) == ErrorCode::Malformed);
    CHECK(calls == 3);

    CHECK(code_of([] { with_retry([] { return 0; }, -1); }) == ErrorCode::Malformed);
}

TEST_CASE("scripted and replay backends are deterministic") {
    auto w = sim::load_world_file(rcs::testing::data_dir() / "worlds" / "od_1.json");
    const Prompt p = host_prompt("Move around and search for the location of the refrigerator.", w);
    for (const auto& id : scripted_policy_ids()) {
        ScriptedBackend b(id);
        const std::string first = sha256_hex(b.complete(p));
        for (int i = 0; i < 100; ++i) CHECK(sha256_hex(b.complete(p)) == first);
    }
    std::vector<std::string> recorded;
    for (int i = 0; i < 100; ++i) recorded.push_back("completion");
    for (int i = 0; i < 100; ++i) {
        ReplayBackend a(recorded), b(recorded);
        CHECK(sha256_hex(a.complete(p)) == sha256_hex(b.complete(p)));
    }
}

TEST_CASE("prompt templates") {
    auto t = PromptTemplate::parse(
        "comment line\n@@ system\nYou drive.\n@@ example\nq\n@@ output\na\n@@ block request\nUser request: {request}\n");
    CHECK(t.system() == "You drive.");
    REQUIRE(t.examples().size() == 1);
    CHECK(t.examples()[0].example_output == "a");
    CHECK(t.render_block(BlockKind::Request, "go") == "User request: go");
    CHECK_NOTHROW(host_tmpl());
    CHECK_NOTHROW(app_tmpl());
}

TEST_CASE("validate_prompt enforces block order") {
    Prompt ok{"s", {}, {Block{BlockKind::Request, "r", "r", {}}, Block{BlockKind::Plan, "p", "p", {}}}};
    CHECK_NOTHROW(validate_prompt(ok));
    Prompt swapped{"s", {}, {Block{BlockKind::Plan, "p", "p", {}}, Block{BlockKind::Request, "r", "r", {}}}};
    CHECK(code_of([&] { validate_prompt(swapped); }) == ErrorCode::Malformed);
    Prompt none{"s", {}, {}};
    CHECK(code_of([&] { validate_prompt(none); }) == ErrorCode::Malformed);
}

TEST_CASE("prompt view reads back what the agents wrote") {
    auto w = sim::load_world_file(rcs::testing::data_dir() / "worlds" / "od_1.json");
    auto plan = make_plan({"Look around", "Approach"});
    Round r;
    r.index = 0;
    r.comment = "turning";
    r.action = CarLeft{60};
    r.exec_result = ExecResult{CarLeft{60}, Outcome::Ok, 0, 60, sim::read_sensors(w)};
    const auto view = parse_prompt_view(app_prompt("Move around and search for the location of the refrigerator.", plan, w, append_round(MemoryLog{}, r)));
    CHECK_FALSE(view.host);
    CHECK(view.request == "Move around and search for the location of the refrigerator.");
    CHECK(view.plan == plan.steps);
    CHECK(view.round() == 1);
    REQUIRE(view.last() != nullptr);
    CHECK(view.last()->action == "car_left");
    CHECK(view.last()->arg == doctest::Approx(60));
    CHECK(view.sensors.ultrasonic_clearance == doctest::Approx(sim::read_sensors(w).ultrasonic_clearance).epsilon(1e-3));
}

TEST_CASE("config validation") {
    CHECK_NOTHROW(validate_config(BackendConfig{ScriptedConfig{"oracle"}}));
    CHECK(code_of([] { validate_config(BackendConfig{ScriptedConfig{"oracle"}, -1}); }) == ErrorCode::Malformed);
    CHECK(code_of([] { validate_config(BackendConfig{HttpChatConfig{}}); }) == ErrorCode::Malformed);
    CHECK(code_of([] { validate_config(BackendConfig{ReplayConfig{}}); }) == ErrorCode::Malformed);
}
