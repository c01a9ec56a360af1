#include "rcs/sim/world.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "rcs/core/digest.hpp"
#include "rcs/core/serialize.hpp"
#include "rcs/error.hpp"

namespace rcs::sim {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }

double number(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) schema(fmt::format("'{}' must be a number", key));
    const double v = it->get<double>();
    if (!std::isfinite(v)) schema(fmt::format("'{}' must be finite", key));
    return v;
}

double number_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? number(j, key) : fallback;
}

std::string string_or(const json& j, const char* key, std::string fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_string()) schema(fmt::format("'{}' must be a string", key));
    return it->get<std::string>();
}

Vec2 point(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        schema("points are [x, y] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

ObjectKind parse_kind(const std::string& s) {
    if (s == "box") return ObjectKind::Box;
    if (s == "wall") return ObjectKind::Wall;
    if (s == "person") return ObjectKind::Person;
    if (s == "paper") return ObjectKind::Paper;
    if (s == "refrigerator") return ObjectKind::Refrigerator;
    if (s == "marker") return ObjectKind::Marker;
    schema(fmt::format("unknown object kind '{}'", s));
}

Shape parse_shape(const json& j) {
    if (!j.is_object()) schema("shape must be an object");
    if (auto it = j.find("circle"); it != j.end()) {
        return Circle{point(it->at("center")), number(*it, "radius")};
    }
    if (auto it = j.find("polygon"); it != j.end()) {
        if (!it->is_array()) schema("polygon must be a list of points");
        Polygon p;
        for (const auto& v : *it) p.vertices.push_back(point(v));
        return p;
    }
    // Axis-aligned rectangle shorthand, stored as a polygon.
    if (auto it = j.find("rect"); it != j.end()) {
        const Vec2 c = point(it->at("center"));
        const Vec2 size = point(it->at("size"));
        const double hw = size.x / 2;
        const double hh = size.y / 2;
        return Polygon{{{c.x - hw, c.y - hh}, {c.x + hw, c.y - hh}, {c.x + hw, c.y + hh}, {c.x - hw, c.y + hh}}};
    }
    schema("shape needs one of circle, polygon, rect");
}

json shape_to_json(const Shape& s) {
    if (const auto* c = std::get_if<Circle>(&s)) {
        return json{{"circle", {{"center", {c->center.x, c->center.y}}, {"radius", c->radius}}}};
    }
    json pts = json::array();
    for (const auto& v : std::get<Polygon>(s).vertices) pts.push_back({v.x, v.y});
    return json{{"polygon", pts}};
}

SimParams parse_params(const json& j) {
    SimParams p;
    if (!j.is_object()) schema("params must be an object");
    p.footprint_radius = number_or(j, "footprint_radius", p.footprint_radius);
    p.ultrasonic_max = number_or(j, "ultrasonic_max", p.ultrasonic_max);
    p.avoid_threshold = number_or(j, "avoid_threshold", p.avoid_threshold);
    p.integration_step = number_or(j, "integration_step", p.integration_step);
    p.hfov = number_or(j, "hfov", p.hfov);
    p.vfov = number_or(j, "vfov", p.vfov);
    p.ir_range = number_or(j, "ir_range", p.ir_range);
    p.ir_angle = number_or(j, "ir_angle", p.ir_angle);
    p.camera_height = number_or(j, "camera_height", p.camera_height);
    p.pitch_min = number_or(j, "pitch_min", p.pitch_min);
    p.pitch_max = number_or(j, "pitch_max", p.pitch_max);
    if (p.footprint_radius <= 0 || p.ultrasonic_max <= 0 || p.integration_step <= 0 || p.hfov <= 0 ||
        p.vfov <= 0 || p.avoid_threshold < 0 || p.ir_range < 0) {
        schema("params out of range");
    }
    if (p.pitch_min < limits::kMinPitch || p.pitch_max > limits::kMaxPitch || p.pitch_min > p.pitch_max) {
        schema("camera pitch limits must lie within [-30, 60]");
    }
    return p;
}

json params_to_json(const SimParams& p) {
    return json{{"footprint_radius", p.footprint_radius}, {"ultrasonic_max", p.ultrasonic_max},
                {"avoid_threshold", p.avoid_threshold},   {"integration_step", p.integration_step},
                {"hfov", p.hfov},                         {"vfov", p.vfov},
                {"ir_range", p.ir_range},                 {"ir_angle", p.ir_angle},
                {"camera_height", p.camera_height},       {"pitch_min", p.pitch_min},
                {"pitch_max", p.pitch_max}};
}

SimObject parse_object(const json& j) {
    if (!j.is_object()) schema("objects must be objects");
    SimObject o;
    o.id = string_or(j, "id", "");
    if (o.id.empty()) schema("object id is required");
    o.kind = parse_kind(string_or(j, "kind", "box"));
    if (!j.contains("shape")) schema(fmt::format("object '{}' has no shape", o.id));
    o.shape = parse_shape(j.at("shape"));
    if (degenerate(o.shape)) schema(fmt::format("object '{}' has a degenerate shape", o.id));
    o.label = string_or(j, "label", std::string(kind_name(o.kind)));
    o.color = string_or(j, "color", "gray");
    if (j.contains("text_on_object")) o.text_on_object = string_or(j, "text_on_object", "");
    if (j.contains("face")) o.face = string_or(j, "face", "");
    o.height = number_or(j, "height", o.height);
    if (o.height <= 0) schema(fmt::format("object '{}' height must be positive", o.id));
    if (auto it = j.find("text_band"); it != j.end()) {
        const Vec2 b = point(*it);
        if (b.x > b.y) schema(fmt::format("object '{}' text_band is inverted", o.id));
        o.text_band = std::make_pair(b.x, b.y);
    }
    return o;
}

}  // namespace

std::string_view kind_name(ObjectKind k) {
    switch (k) {
        case ObjectKind::Box: return "box";
        case ObjectKind::Wall: return "wall";
        case ObjectKind::Person: return "person";
        case ObjectKind::Paper: return "paper";
        case ObjectKind::Refrigerator: return "refrigerator";
        case ObjectKind::Marker: return "marker";
    }
    return "box";
}

const SimObject* WorldState::find(std::string_view id) const {
    for (const auto& o : objects) {
        if (o.id == id) return &o;
    }
    return nullptr;
}

bool footprint_overlaps(const WorldState& world, Vec2 center) {
    for (const auto& o : world.objects) {
        if (disc_overlaps(o.shape, center, world.params.footprint_radius)) return true;
    }
    return false;
}

WorldState load_world(const json& doc) {
    if (!doc.is_object()) schema("world document must be an object");
    WorldState w;
    if (auto it = doc.find("params"); it != doc.end()) w.params = parse_params(*it);
    auto robot = doc.find("robot");
    if (robot == doc.end() || !robot->is_object()) schema("world needs a robot pose");
    w.robot.x = number(*robot, "x");
    w.robot.y = number(*robot, "y");
    w.robot.heading = normalize_heading(number_or(*robot, "heading", 0.0));
    w.robot.camera_pitch = number_or(*robot, "camera_pitch", 0.0);
    if (w.robot.camera_pitch < w.params.pitch_min || w.robot.camera_pitch > w.params.pitch_max) {
        schema("camera_pitch outside the pitch limits");
    }
    if (auto it = doc.find("objects"); it != doc.end()) {
        if (!it->is_array()) schema("objects must be a list");
        std::set<std::string> ids;
        for (const auto& o : *it) {
            w.objects.push_back(parse_object(o));
            if (!ids.insert(w.objects.back().id).second) schema(fmt::format("duplicate id '{}'", w.objects.back().id));
        }
    }
    if (auto it = doc.find("buzzer_events"); it != doc.end()) w.buzzer_events = it->get<std::vector<double>>();
    w.clock = number_or(doc, "clock", 0.0);
    if (footprint_overlaps(w, w.robot.position())) {
        throw Error(ErrorCode::OverlapError, "robot footprint starts inside an object");
    }
    return w;
}

WorldState load_world_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open world file {}", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        schema(fmt::format("{}: {}", path.string(), e.what()));
    }
    return load_world(doc);
}

json world_to_json(const WorldState& w) {
    json objects = json::array();
    for (const auto& o : w.objects) {
        json j{{"id", o.id},       {"kind", std::string(kind_name(o.kind))}, {"shape", shape_to_json(o.shape)},
               {"label", o.label}, {"color", o.color},                        {"height", o.height}};
        if (o.text_on_object) j["text_on_object"] = *o.text_on_object;
        if (o.text_band) j["text_band"] = {o.text_band->first, o.text_band->second};
        if (o.face) j["face"] = *o.face;
        objects.push_back(std::move(j));
    }
    return json{{"robot",
                 {{"x", w.robot.x}, {"y", w.robot.y}, {"heading", w.robot.heading},
                  {"camera_pitch", w.robot.camera_pitch}}},
                {"params", params_to_json(w.params)},
                {"objects", objects},
                {"buzzer_events", w.buzzer_events},
                {"clock", w.clock}};
}

std::string world_digest(const WorldState& world) { return sha256_hex(dump_line(world_to_json(world))); }

}  // namespace rcs::sim
