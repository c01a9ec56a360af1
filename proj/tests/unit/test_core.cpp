#include <doctest.h>

#include <random>

#include "rcs/core/memory.hpp"
#include "rcs/core/serialize.hpp"
#include "rcs/core/types.hpp"
#include "rcs/error.hpp"

using namespace rcs;

namespace {

Round plain_round(int index, const std::string& comment = "c") {
    Round r;
    r.index = index;
    r.comment = comment;
    return r;
}

MemoryLog log_of(int n) {
    MemoryLog log;
    for (int i = 0; i < n; ++i) log = append_round(log, plain_round(i, "comment " + std::to_string(i)));
    return log;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("append_round base and induction") {
    auto one = append_round(MemoryLog{}, plain_round(0));
    CHECK(one.size() == 1);
    auto three = log_of(3);
    auto four = append_round(three, plain_round(3));
    CHECK(four.size() == 4);
    CHECK(three.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(four[i] == three[i]);
}

TEST_CASE("append_round rejects a skipped index") {
    auto three = log_of(3);
    CHECK(code_of([&] { (void)append_round(three, plain_round(5)); }) == ErrorCode::IndexMismatch);
    CHECK(code_of([&] { (void)append_round(three, plain_round(2)); }) == ErrorCode::IndexMismatch);
}

TEST_CASE("render_memory windows") {
    CHECK(render_memory(MemoryLog{}, 5).empty());
    CHECK(render_memory(log_of(2), 0).empty());

    const std::string text = render_memory(log_of(10), 3);
    int headers = 0;
    for (std::size_t pos = 0; (pos = text.find("[round ", pos)) != std::string::npos; ++pos) ++headers;
    CHECK(headers == 3);
    CHECK(text.find("[round 7]") != std::string::npos);
    CHECK(text.find("[round 9]") != std::string::npos);
    CHECK(text.find("[round 6]") == std::string::npos);
    CHECK(text.find("[round 7]") < text.find("[round 9]"));
}

TEST_CASE("render_memory mentions action, outcome and status") {
    Round r = plain_round(0, "moving");
    r.action = CarForward{0.5};
    r.exec_result = ExecResult{CarForward{0.5}, Outcome::Avoided, 0.2, -90, {}};
    auto log = append_round(MemoryLog{}, r);
    Round f = plain_round(1, "done");
    f.status = Status::Finish;
    log = append_round(log, f);
    const std::string text = render_memory(log, 10);
    CHECK(text.find("car_forward") != std::string::npos);
    CHECK(text.find("Avoided") != std::string::npos);
    CHECK(text.find("CONTINUE") != std::string::npos);
    CHECK(text.find("FINISH") != std::string::npos);
    CHECK(text.find("none") != std::string::npos);
    CHECK(render_memory(log, 10) == text);
}

TEST_CASE("parse_status normalizes and is strict") {
    CHECK(parse_status("FINISH") == Status::Finish);
    CHECK(parse_status(" continue ") == Status::Continue);
    CHECK(parse_status("Finish\n") == Status::Finish);
    CHECK(code_of([] { parse_status("DONE"); }) == ErrorCode::UnknownStatus);
    CHECK(code_of([] { parse_status(""); }) == ErrorCode::UnknownStatus);
    CHECK(status_token(Status::Continue) == "CONTINUE");
    CHECK(status_token(Status::Finish) == "FINISH");
}

TEST_CASE("make_request rejects blank text") {
    CHECK(make_request("Go", "x").text == "Go");
    CHECK(code_of([] { make_request("  \t", "x"); }) == ErrorCode::Malformed);
}

TEST_CASE("command argument ranges") {
    CHECK(std::get<CarForward>(make_command("car_forward", 10.0)).distance == 10.0);
    CHECK(code_of([] { make_command("car_forward", 0.0); }) == ErrorCode::ArgOutOfRange);
    CHECK(code_of([] { make_command("car_back", 10.5); }) == ErrorCode::ArgOutOfRange);
    CHECK(std::get<CarLeft>(make_command("car_left", 360)).angle == 360);
    CHECK(code_of([] { make_command("car_right", 361); }) == ErrorCode::ArgOutOfRange);
    CHECK(std::get<CameraMove>(make_command("camera_move", -30)).pitch == -30);
    CHECK(std::get<CameraMove>(make_command("camera_move", 60)).pitch == 60);
    CHECK(code_of([] { make_command("camera_move", 60.5); }) == ErrorCode::ArgOutOfRange);
    CHECK(code_of([] { make_command("buzzer", 0); }) == ErrorCode::ArgOutOfRange);
    CHECK(code_of([] { make_command("fly", 1); }) == ErrorCode::UnknownCommand);
    CHECK(code_of([] { make_command("car_forward", std::nan("")); }) == ErrorCode::ArgOutOfRange);
    CHECK(describe(CarForward{0.5}) == "car_forward(distance=0.5)");
}

TEST_CASE("command json round trip") {
    const std::vector<Command> cmds{CarForward{0.5}, CarBack{1.25}, CarLeft{30}, CarRight{90},
                                    CameraMove{-12.5}, Buzzer{2}};
    for (const auto& c : cmds) {
        const Json j = command_to_json(c);
        CHECK(command_from_json(j) == c);
        CHECK(command_from_json(Json::parse(dump_line(j))) == c);
    }
    CHECK(code_of([] { command_from_json(Json{{"name", "fly"}, {"args", Json::object()}}); }) ==
          ErrorCode::UnknownCommand);
    CHECK(code_of([] { command_from_json(Json::array()); }) == ErrorCode::Malformed);
}

TEST_CASE("observation text is derived from items") {
    VisibleObject far{"box", "red", "circle", std::nullopt, std::nullopt, 2.0, 5.0};
    VisibleObject near{"person", "blue", "circle", std::nullopt, std::string("smiling"), 1.0, -3.0};
    auto a = make_observation({far, near});
    auto b = make_observation({near, far});
    CHECK(a.free_text == b.free_text);
    CHECK(a.free_text.find("person") < a.free_text.find("box"));
    CHECK(a.free_text == render_observation_text(a.items));
}

TEST_CASE("memory json round trip") {
    MemoryLog log;
    for (int i = 0; i < 4; ++i) {
        Round r = plain_round(i, "step " + std::to_string(i));
        r.observation = make_observation({VisibleObject{"box", "red", "square", std::string("ACME"), std::nullopt,
                                                        1.5, 3.0}});
        if (i == 0) r.thoughts = "plan it";
        if (i < 3) {
            r.action = CarLeft{15.0 * (i + 1)};
            r.exec_result = ExecResult{*r.action, Outcome::Ok, 0, 15.0 * (i + 1), SensorData{1.2, true, false}};
        } else {
            r.status = Status::Finish;
        }
        log = append_round(log, r);
    }
    const Json j = memory_to_json(log);
    CHECK(memory_from_json(j) == log);
    CHECK(memory_from_json(Json::parse(dump_line(j))) == log);
}

TEST_CASE("memory indices stay strictly increasing under random appends") {
    std::mt19937 rng(7);
    MemoryLog log;
    for (int i = 0; i < 200; ++i) {
        const int idx = static_cast<int>(rng() % (log.size() + 2));
        try {
            log = append_round(log, plain_round(idx));
            CHECK(static_cast<std::size_t>(idx + 1) == log.size());
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::IndexMismatch);
        }
    }
    for (std::size_t i = 0; i < log.size(); ++i) CHECK(log[i].index == static_cast<int>(i));
}

TEST_CASE("base64 round trip") {
    std::vector<std::uint8_t> bytes;
    for (int n = 0; n < 20; ++n) {
        CHECK(base64_decode(base64_encode(bytes)) == bytes);
        bytes.push_back(static_cast<std::uint8_t>(n * 37));
    }
}

TEST_CASE("plan requires a non-blank step") {
    CHECK(make_plan({"go"}).steps.size() == 1);
    CHECK(code_of([] { make_plan({}); }) == ErrorCode::Malformed);
    CHECK(code_of([] { make_plan({"go", " "}); }) == ErrorCode::Malformed);
}
