#include "rcs/sim/robot_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcs/error.hpp"

namespace rcs::sim {

namespace {

constexpr double kLinearSpeed = 0.2;  // m/s
constexpr double kTurnRate = 90.0;    // deg/s
constexpr double kServoTime = 0.5;    // s
constexpr double kFaceBand = 0.25;    // m below the top of a person

double nearest_hit(const WorldState& world, Vec2 origin, Vec2 dir, const SimObject* skip = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : world.objects) {
        if (&o == skip) continue;
        if (auto t = ray_hit(o.shape, origin, dir)) best = std::min(best, *t);
    }
    return best;
}

double ultrasonic(const WorldState& world, const RobotPose& pose) {
    const Vec2 dir = unit(pose.heading);
    const Vec2 front = pose.position() + world.params.footprint_radius * dir;
    return raycast(world, front, pose.heading, world.params.ultrasonic_max);
}

// Largest fraction of the way from `from` to `to` that keeps the footprint clear.
Vec2 last_clear_point(const WorldState& world, Vec2 from, Vec2 to) {
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (footprint_overlaps(world, from + mid * (to - from))) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return from + lo * (to - from);
}

struct Drive {
    double distance;
    bool forward;
};

ExecResult drive(WorldState& w, const Command& cmd, Drive d) {
    ExecResult r{cmd, Outcome::Ok, 0.0, 0.0, {}};
    const Vec2 start = w.robot.position();
    const Vec2 dir = unit(d.forward ? w.robot.heading : w.robot.heading + 180.0);
    const double step = w.params.integration_step;
    const auto increments = static_cast<long>(std::ceil(d.distance / step - 1e-9));
    double travelled = 0.0;
    for (long k = 1; k <= std::max(1L, increments); ++k) {
        if (d.forward && ultrasonic(w, w.robot) < w.params.avoid_threshold) {
            w.robot.heading = normalize_heading(w.robot.heading - 90.0);
            r.outcome = Outcome::Avoided;
            r.heading_change = -90.0;
            break;
        }
        const double target = std::min(static_cast<double>(k) * step, d.distance);
        const Vec2 next = start + target * dir;
        if (footprint_overlaps(w, next)) {
            const Vec2 contact = last_clear_point(w, start + travelled * dir, next);
            travelled = std::min(norm(contact - start), d.distance);
            w.robot.x = contact.x;
            w.robot.y = contact.y;
            r.outcome = Outcome::Blocked;
            break;
        }
        travelled = target;
        w.robot.x = next.x;
        w.robot.y = next.y;
    }
    r.distance_travelled = travelled;
    w.clock += travelled / kLinearSpeed;
    return r;
}

bool is_rectangle(const Polygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() != 4) return false;
    for (std::size_t i = 0; i < 4; ++i) {
        const Vec2 a = v[(i + 1) % 4] - v[i];
        const Vec2 b = v[(i + 2) % 4] - v[(i + 1) % 4];
        if (std::abs(dot(a, b)) > 1e-9 * norm(a) * norm(b)) return false;
    }
    return true;
}

double band_angle(double z, double camera_height, double horizontal) {
    return rad2deg(std::atan2(z - camera_height, horizontal));
}

}  // namespace

double raycast(const WorldState& world, Vec2 origin, double direction_deg, double max_range) {
    const double t = nearest_hit(world, origin, unit(direction_deg));
    return std::min(t, max_range);
}

SensorData read_sensors(const WorldState& world) {
    const auto& p = world.params;
    const auto& pose = world.robot;
    const double inf = std::numeric_limits<double>::infinity();
    SensorData s;
    s.ultrasonic_clearance = ultrasonic(world, pose);
    s.ir_left = raycast(world, pose.position(), pose.heading + p.ir_angle, inf) - p.footprint_radius <= p.ir_range;
    s.ir_right = raycast(world, pose.position(), pose.heading - p.ir_angle, inf) - p.footprint_radius <= p.ir_range;
    return s;
}

std::pair<WorldState, ExecResult> apply_command(const WorldState& world, const Command& command) {
    if (!command_valid(command)) throw Error(ErrorCode::InvalidCommand, describe(command));
    WorldState w = world;
    ExecResult r = std::visit(
        [&](const auto& c) -> ExecResult {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CarForward>) {
                return drive(w, command, {c.distance, true});
            } else if constexpr (std::is_same_v<T, CarBack>) {
                return drive(w, command, {c.distance, false});
            } else if constexpr (std::is_same_v<T, CarLeft> || std::is_same_v<T, CarRight>) {
                const double delta = std::is_same_v<T, CarLeft> ? c.angle : -c.angle;
                w.robot.heading = normalize_heading(w.robot.heading + delta);
                w.clock += c.angle / kTurnRate;
                return ExecResult{command, Outcome::Ok, 0.0, delta, {}};
            } else if constexpr (std::is_same_v<T, CameraMove>) {
                const double pitch = std::clamp(c.pitch, w.params.pitch_min, w.params.pitch_max);
                w.robot.camera_pitch = pitch;
                w.clock += kServoTime;
                return ExecResult{command, pitch == c.pitch ? Outcome::Ok : Outcome::Clamped, 0.0, 0.0, {}};
            } else {
                w.buzzer_events.push_back(w.clock);
                w.clock += c.duration;
                return ExecResult{command, Outcome::Ok, 0.0, 0.0, {}};
            }
        },
        command);
    r.sensor_after = read_sensors(w);
    return {std::move(w), r};
}

Observation render_camera(const WorldState& world) {
    const auto& p = world.params;
    const auto& pose = world.robot;
    const Vec2 eye = pose.position();
    const double view_lo = pose.camera_pitch - p.vfov / 2;
    const double view_hi = pose.camera_pitch + p.vfov / 2;
    const auto band_visible = [&](double z0, double z1, double horizontal) {
        return band_angle(z1, p.camera_height, horizontal) >= view_lo &&
               band_angle(z0, p.camera_height, horizontal) <= view_hi;
    };

    std::vector<VisibleObject> items;
    for (const auto& o : world.objects) {
        const Vec2 c = centroid(o.shape);
        const Vec2 to = c - eye;
        const double bearing = normalize_bearing(rad2deg(std::atan2(to.y, to.x)) - pose.heading);
        if (std::abs(bearing) > p.hfov / 2) continue;

        const double range = surface_distance(o.shape, eye);
        if (!band_visible(0.0, o.height, range)) continue;

        // Occlusion along the center line.
        const double center_dist = norm(to);
        if (center_dist > 0) {
            const Vec2 dir = (1.0 / center_dist) * to;
            const double own = ray_hit(o.shape, eye, dir).value_or(center_dist);
            if (nearest_hit(world, eye, dir, &o) < own - 1e-9) continue;
        }

        VisibleObject v;
        v.label = o.label;
        v.color = o.color;
        if (std::holds_alternative<Circle>(o.shape)) {
            v.shape = "circle";
        } else {
            v.shape = is_rectangle(std::get<Polygon>(o.shape)) ? "rectangle" : "polygon";
        }
        if (o.text_on_object) {
            const auto band = o.text_band.value_or(std::make_pair(0.0, o.height));
            if (band_visible(band.first, band.second, range)) v.text_on_object = o.text_on_object;
        }
        if (o.face && band_visible(std::max(0.0, o.height - kFaceBand), o.height, range)) v.face = o.face;
        v.distance = range;
        v.bearing = bearing;
        items.push_back(std::move(v));
    }
    return make_observation(std::move(items));
}

}  // namespace rcs::sim
