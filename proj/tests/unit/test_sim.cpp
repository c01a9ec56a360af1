#include <doctest.h>

#include <random>

#include "rcs/core/serialize.hpp"
#include "rcs/error.hpp"
#include "rcs/sim/robot_sim.hpp"
#include "rcs/sim/world.hpp"
#include "test_support.hpp"

using namespace rcs;
using namespace rcs::sim;
using rcs::testing::circle_obj;
using rcs::testing::empty_world;
using rcs::testing::rect_obj;
using rcs::testing::world_with;
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

WorldState step(const WorldState& w, const Command& c, ExecResult* out = nullptr) {
    auto [next, res] = apply_command(w, c);
    if (out) *out = res;
    return next;
}

}  // namespace

TEST_CASE("load_world basics") {
    auto w = empty_world();
    CHECK(w.objects.empty());
    CHECK(w.params.ultrasonic_max == 4.0);
    CHECK(w.params.avoid_threshold == 0.30);

    CHECK(code_of([] { world_with(json::array({circle_obj("box", 0.05, 0, 0.1)})); }) == ErrorCode::OverlapError);
    CHECK(code_of([] { load_world(json{{"objects", json::array()}}); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { world_with(json::array({json{{"id", "x"}, {"kind", "box"}}})); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { world_with(json::array({circle_obj("x", 2, 0, 0)})); }) == ErrorCode::SchemaError);

    auto custom = load_world(json{{"robot", {{"x", 0}, {"y", 0}}}, {"params", {{"hfov", 90.0}}}});
    CHECK(custom.params.hfov == 90.0);
    CHECK(custom.params.vfov == 49.0);
}

TEST_CASE("world json round trip") {
    auto w = world_with(json::array({circle_obj("a", 2, 1, 0.3), rect_obj("wall", -2, 0, 0.2, 3)}), 0.5, -0.5, 45);
    auto again = load_world(world_to_json(w));
    CHECK(again == w);
    CHECK(world_digest(again) == world_digest(w));
}

TEST_CASE("bundled worlds load") {
    for (const auto& entry : std::filesystem::directory_iterator(rcs::testing::data_dir() / "worlds")) {
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_world_file(entry.path()));
    }
}

TEST_CASE("raycast analytic cases") {
    auto empty = empty_world();
    CHECK(raycast(empty, {0, 0}, 0, 4.0) == 4.0);

    auto wall = world_with(json::array({rect_obj("wall", 1.1, 0, 0.2, 4)}));
    CHECK(raycast(wall, {0, 0}, 0, 4.0) == doctest::Approx(1.0).epsilon(1e-12));

    auto circ = world_with(json::array({circle_obj("c", 2, 0, 0.5)}));
    CHECK(raycast(circ, {0, 0}, 0, 4.0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(raycast(circ, {0, 0}, 180, 4.0) == 4.0);
    CHECK(raycast(circ, {0, 0}, 0, 1.0) == 1.0);
}

TEST_CASE("read_sensors examples") {
    auto s = read_sensors(empty_world());
    CHECK(s == SensorData{4.0, false, false});

    // wall face at x=0.35, so 0.25 from the front edge of the footprint
    auto wall = world_with(json::array({rect_obj("wall", 0.45, 0, 0.2, 4)}));
    auto ws = read_sensors(wall);
    CHECK(ws.ultrasonic_clearance == doctest::Approx(0.25));
    // the +-30 deg rays meet the wall 0.304 m beyond the footprint, past IR range
    CHECK_FALSE(ws.ir_left);
    CHECK_FALSE(ws.ir_right);

    auto closer = world_with(json::array({rect_obj("wall", 0.35, 0, 0.2, 4)}));
    auto cs = read_sensors(closer);
    CHECK(cs.ultrasonic_clearance == doctest::Approx(0.15));
    CHECK(cs.ir_left);
    CHECK(cs.ir_right);

    auto behind = world_with(json::array({circle_obj("b", -1, 0, 0.3)}));
    CHECK(read_sensors(behind) == SensorData{4.0, false, false});
}

TEST_CASE("car_forward in an empty world") {
    ExecResult r;
    auto w = step(empty_world(), CarForward{0.5}, &r);
    CHECK(w.robot.x == doctest::Approx(0.5));
    CHECK(w.robot.y == doctest::Approx(0.0));
    CHECK(w.robot.heading == 0.0);
    CHECK(r.outcome == Outcome::Ok);
    CHECK(r.distance_travelled == doctest::Approx(0.5));
    CHECK(std::holds_alternative<CarForward>(r.command_echo));
}

TEST_CASE("car_forward avoids a close wall") {
    auto wall = world_with(json::array({rect_obj("wall", 0.45, 0, 0.2, 4)}));
    ExecResult r;
    auto w = step(wall, CarForward{1.0}, &r);
    CHECK(r.outcome == Outcome::Avoided);
    CHECK(r.distance_travelled == 0.0);
    CHECK(r.heading_change == -90.0);
    CHECK(w.robot.x == 0.0);
    CHECK(w.robot.y == 0.0);
    CHECK(w.robot.heading == 270.0);
}

TEST_CASE("car_forward stops before an obstacle further away") {
    auto wall = world_with(json::array({rect_obj("wall", 1.1, 0, 0.2, 4)}));
    ExecResult r;
    auto w = step(wall, CarForward{2.0}, &r);
    CHECK(r.outcome == Outcome::Avoided);
    CHECK(r.heading_change == -90.0);
    CHECK(r.distance_travelled < 2.0);
    CHECK(r.distance_travelled > 0.5);
    CHECK_FALSE(footprint_overlaps(w, w.robot.position()));
}

TEST_CASE("car_back is blocked on rear contact") {
    auto wall = world_with(json::array({rect_obj("wall", -0.6, 0, 0.2, 4)}));
    ExecResult r;
    auto w = step(wall, CarBack{1.0}, &r);
    CHECK(r.outcome == Outcome::Blocked);
    CHECK(r.distance_travelled == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(r.distance_travelled <= 1.0);
    CHECK(w.robot.heading == 0.0);
    CHECK_FALSE(footprint_overlaps(w, w.robot.position()));
}

TEST_CASE("turns, camera and buzzer") {
    ExecResult r;
    auto w = step(empty_world(), CarLeft{90}, &r);
    CHECK(w.robot.heading == 90.0);
    CHECK(r.heading_change == 90.0);
    w = step(w, CarRight{180}, &r);
    CHECK(w.robot.heading == 270.0);
    CHECK(r.heading_change == -180.0);
    CHECK(w.robot.x == 0.0);

    w = step(w, CameraMove{45}, &r);
    CHECK(w.robot.camera_pitch == 45.0);
    CHECK(r.outcome == Outcome::Ok);

    auto narrow = load_world(json{{"robot", {{"x", 0}, {"y", 0}}}, {"params", {{"pitch_max", 30.0}}}});
    narrow = step(narrow, CameraMove{45}, &r);
    CHECK(narrow.robot.camera_pitch == 30.0);
    CHECK(r.outcome == Outcome::Clamped);

    w = step(w, Buzzer{1.0}, &r);
    w = step(w, Buzzer{0.5}, &r);
    CHECK(w.buzzer_events.size() == 2);
    CHECK(w.buzzer_events[0] < w.buzzer_events[1]);

    CHECK(code_of([&] { apply_command(w, CarForward{-1}); }) == ErrorCode::InvalidCommand);
}

TEST_CASE("square closure") {
    auto w = empty_world();
    for (int i = 0; i < 4; ++i) {
        w = step(w, CarForward{0.6});
        w = step(w, CarLeft{90});
    }
    CHECK(std::abs(w.robot.x) < 1e-6);
    CHECK(std::abs(w.robot.y) < 1e-6);
    CHECK(std::abs(normalize_bearing(w.robot.heading)) < 1e-9);
}

TEST_CASE("camera field of view") {
    auto ahead = world_with(json::array({circle_obj("box", 1.1, 0, 0.1)}));
    auto obs = render_camera(ahead);
    REQUIRE(obs.items.size() == 1);
    CHECK(obs.items[0].bearing == doctest::Approx(0.0));
    CHECK(obs.items[0].distance == doctest::Approx(1.0));
    CHECK(obs.free_text.find("box") != std::string::npos);

    const double b = deg2rad(40);
    auto side = world_with(json::array({circle_obj("box", 1.5 * std::cos(b), 1.5 * std::sin(b), 0.1)}));
    CHECK(render_camera(side).items.empty());
}

TEST_CASE("face band needs the camera raised") {
    json person{{"id", "p"},
                {"kind", "person"},
                {"label", "person"},
                {"face", "smiling"},
                {"height", 1.6},
                {"shape", {{"circle", {{"center", {1.0, 0.0}}, {"radius", 0.1}}}}}};
    auto w = world_with(json::array({person}));
    auto low = render_camera(w);
    REQUIRE(low.items.size() == 1);
    CHECK_FALSE(low.items[0].face.has_value());

    auto raised = step(w, CameraMove{40});
    auto high = render_camera(raised);
    REQUIRE(high.items.size() == 1);
    CHECK(high.items[0].face == std::optional<std::string>("smiling"));
}

TEST_CASE("simulation is deterministic and conserves pose") {
    auto w = world_with(json::array({circle_obj("a", 1.5, 0.4, 0.3), rect_obj("w", 0, 2.0, 4, 0.2)}));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int i = 0; i < 300; ++i) {
        Command c;
        switch (rng() % 6) {
            case 0: c = CarForward{u(rng)}; break;
            case 1: c = CarBack{u(rng)}; break;
            case 2: c = CarLeft{u(rng) * 180}; break;
            case 3: c = CarRight{u(rng) * 180}; break;
            case 4: c = CameraMove{u(rng) * 60 - 30}; break;
            default: c = Buzzer{u(rng)}; break;
        }
        auto [a, ra] = apply_command(w, c);
        auto [b, rb] = apply_command(w, c);
        CHECK(a == b);
        CHECK(ra == rb);
        CHECK(dump_line(json(render_camera(a))) == dump_line(json(render_camera(b))));
        if (std::holds_alternative<CarLeft>(c) || std::holds_alternative<CarRight>(c)) {
            CHECK(a.robot.x == w.robot.x);
            CHECK(a.robot.y == w.robot.y);
        }
        if ((std::holds_alternative<CarForward>(c) || std::holds_alternative<CarBack>(c)) &&
            ra.outcome != Outcome::Avoided) {
            CHECK(a.robot.heading == w.robot.heading);
        }
        if (std::holds_alternative<CarForward>(c) || std::holds_alternative<CarBack>(c))
            CHECK(ra.distance_travelled <= command_arg(c) + 1e-12);
        CHECK_FALSE(footprint_overlaps(a, a.robot.position()));
        w = a;
    }
}

TEST_CASE("raycast matches a marching oracle") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> pos(-3, 3), rad(0.1, 0.6), ang(0, 360);
    for (int scene = 0; scene < 40; ++scene) {
        json objs = json::array();
        for (int k = 0; k < 4; ++k) {
            if (k % 2 == 0)
                objs.push_back(circle_obj("c" + std::to_string(k), pos(rng), pos(rng), rad(rng)));
            else
                objs.push_back(rect_obj("r" + std::to_string(k), pos(rng), pos(rng), rad(rng) * 2, rad(rng) * 2));
        }
        WorldState w = load_world(json{{"robot", {{"x", 10}, {"y", 10}}}, {"objects", objs}});
        const Vec2 origin{pos(rng) * 1.3, pos(rng) * 1.3};
        const double heading = ang(rng);
        const double fast = raycast(w, origin, heading, 4.0);
        const double slow = rcs::testing::brute_force_raycast(w, origin, heading, 4.0);
        CHECK(std::abs(fast - slow) <= 1e-3);
    }
}
