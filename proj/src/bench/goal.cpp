#include "rcs/bench/goal.hpp"

#include <cmath>
#include <regex>

#include <fmt/format.h>

#include "rcs/error.hpp"
#include "rcs/sim/geometry.hpp"

namespace rcs::bench {

using nlohmann::json;

std::string_view cmp_op_name(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Eq: return "==";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
    }
    return ">=";
}

CmpOp parse_cmp_op(std::string_view s) {
    for (CmpOp op : {CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ge, CmpOp::Gt})
        if (cmp_op_name(op) == s) return op;
    throw Error(ErrorCode::SchemaError, fmt::format("unknown comparison '{}'", s));
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::SchemaError, "goal: " + what); }

double num(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) bad(fmt::format("'{}' must be a number", key));
    return j.at(key).get<double>();
}

std::string str(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_string()) bad(fmt::format("'{}' must be a string", key));
    return j.at(key).get<std::string>();
}

std::vector<Goal> terms(const json& j) {
    if (!j.is_array() || j.empty()) bad("and/or need a non-empty list");
    std::vector<Goal> out;
    for (const auto& t : j) out.push_back(goal_from_json(t));
    return out;
}

}  // namespace

Goal goal_from_json(const json& j) {
    if (!j.is_object() || j.size() != 1) bad("each node is an object with exactly one key");
    const auto& [key, v] = *j.items().begin();
    if (key == "and") return {And{terms(v)}};
    if (key == "or") return {Or{terms(v)}};
    if (key == "not") return {Not{std::make_shared<const Goal>(goal_from_json(v))}};
    if (key == "near") {
        const double d = num(v, "d");
        if (d < 0) bad("near.d must be >= 0");
        return {Near{str(v, "object"), d}};
    }
    if (key == "buzzer_count") {
        const double n = num(v, "n");
        if (n < 0 || n != std::floor(n)) bad("buzzer_count.n must be a non-negative integer");
        return {BuzzerCount{parse_cmp_op(str(v, "op")), static_cast<int>(n)}};
    }
    if (key == "pose_within") {
        const double tol = num(v, "tol");
        if (tol < 0) bad("pose_within.tol must be >= 0");
        return {PoseWithin{num(v, "x"), num(v, "y"), tol}};
    }
    if (key == "heading_within") {
        const double tol = num(v, "tol");
        if (tol < 0) bad("heading_within.tol must be >= 0");
        return {HeadingWithin{num(v, "deg"), tol}};
    }
    if (key == "comment_matches") {
        if (!v.is_string()) bad("comment_matches takes a pattern string");
        try {
            std::regex re(v.get<std::string>(), std::regex::icase);
        } catch (const std::regex_error& e) {
            bad(fmt::format("bad pattern: {}", e.what()));
        }
        return {CommentMatches{v.get<std::string>()}};
    }
    if (key == "path_length_at_least") {
        if (!v.is_number()) bad("path_length_at_least takes a number");
        return {PathLengthAtLeast{v.get<double>()}};
    }
    if (key == "rotation_at_least") {
        if (!v.is_number()) bad("rotation_at_least takes a number");
        return {RotationAtLeast{v.get<double>()}};
    }
    if (key == "camera_pitch_at_least") {
        if (!v.is_number()) bad("camera_pitch_at_least takes a number");
        return {CameraPitchAtLeast{v.get<double>()}};
    }
    bad(fmt::format("unknown node '{}'", key));
}

json goal_to_json(const Goal& g) {
    struct V {
        json operator()(const Near& a) const { return {{"near", {{"object", a.object_id}, {"d", a.d}}}}; }
        json operator()(const BuzzerCount& a) const {
            return {{"buzzer_count", {{"op", std::string(cmp_op_name(a.op))}, {"n", a.n}}}};
        }
        json operator()(const PoseWithin& a) const {
            return {{"pose_within", {{"x", a.x}, {"y", a.y}, {"tol", a.tol}}}};
        }
        json operator()(const HeadingWithin& a) const {
            return {{"heading_within", {{"deg", a.deg}, {"tol", a.tol}}}};
        }
        json operator()(const CommentMatches& a) const { return {{"comment_matches", a.pattern}}; }
        json operator()(const PathLengthAtLeast& a) const { return {{"path_length_at_least", a.m}}; }
        json operator()(const RotationAtLeast& a) const { return {{"rotation_at_least", a.deg}}; }
        json operator()(const CameraPitchAtLeast& a) const { return {{"camera_pitch_at_least", a.deg}}; }
        json operator()(const And& a) const { return {{"and", list(a.terms)}}; }
        json operator()(const Or& a) const { return {{"or", list(a.terms)}}; }
        json operator()(const Not& a) const { return {{"not", goal_to_json(*a.term)}}; }
        static json list(const std::vector<Goal>& ts) {
            json out = json::array();
            for (const auto& t : ts) out.push_back(goal_to_json(t));
            return out;
        }
    };
    return std::visit(V{}, g.node);
}

void check_goal(const Goal& g, const sim::WorldState& world) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Near>) {
                if (!world.find(n.object_id)) bad(fmt::format("near: no object '{}' in world", n.object_id));
            } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
                for (const auto& t : n.terms) check_goal(t, world);
            } else if constexpr (std::is_same_v<T, Not>) {
                check_goal(*n.term, world);
            }
        },
        g.node);
}

namespace {

bool compare(CmpOp op, int a, int b) {
    switch (op) {
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Eq: return a == b;
        case CmpOp::Ge: return a >= b;
        case CmpOp::Gt: return a > b;
    }
    return false;
}

}  // namespace

bool evaluate(const Goal& g, const sim::WorldState& world, const MemoryLog& trace, EvalOptions opts) {
    struct V {
        const sim::WorldState& world;
        const MemoryLog& trace;
        EvalOptions opts;

        bool operator()(const Near& a) const {
            const auto* o = world.find(a.object_id);
            return o && sim::surface_distance(o->shape, world.robot.position()) <= a.d;
        }
        bool operator()(const BuzzerCount& a) const {
            return compare(a.op, static_cast<int>(world.buzzer_events.size()), a.n);
        }
        bool operator()(const PoseWithin& a) const {
            return std::hypot(world.robot.x - a.x, world.robot.y - a.y) <= a.tol;
        }
        bool operator()(const HeadingWithin& a) const {
            return std::abs(sim::normalize_bearing(world.robot.heading - a.deg)) <= a.tol;
        }
        bool operator()(const CommentMatches& a) const {
            if (opts.comments_hold) return true;
            if (trace.size() == 0) return false;
            return std::regex_search(trace.back().comment, std::regex(a.pattern, std::regex::icase));
        }
        bool operator()(const PathLengthAtLeast& a) const {
            double sum = 0;
            for (const auto& r : trace.rounds())
                if (r.exec_result) sum += r.exec_result->distance_travelled;
            return sum >= a.m - kGoalSlack;
        }
        bool operator()(const RotationAtLeast& a) const {
            double sum = 0;
            for (const auto& r : trace.rounds())
                if (r.exec_result) sum += std::abs(r.exec_result->heading_change);
            return sum >= a.deg - kGoalSlack;
        }
        bool operator()(const CameraPitchAtLeast& a) const { return world.robot.camera_pitch >= a.deg; }
        bool operator()(const And& a) const {
            for (const auto& t : a.terms)
                if (!evaluate(t, world, trace, opts)) return false;
            return true;
        }
        bool operator()(const Or& a) const {
            for (const auto& t : a.terms)
                if (evaluate(t, world, trace, opts)) return true;
            return false;
        }
        bool operator()(const Not& a) const { return !evaluate(*a.term, world, trace, opts); }
    };
    return std::visit(V{world, trace, opts}, g.node);
}

bool requires_actuation(const Goal& g, const sim::WorldState& initial) {
    return !evaluate(g, initial, MemoryLog{}, EvalOptions{true});
}

}  // namespace rcs::bench
