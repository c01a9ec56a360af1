#pragma once

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

namespace rcs::sim {

struct Vec2 {
    double x = 0;
    double y = 0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

inline constexpr double kPi = 3.14159265358979323846;
inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Unit vector for a heading in degrees, counter-clockwise from +x.
Vec2 unit(double heading_deg);
// [0, 360)
double normalize_heading(double deg);
// (-180, 180]
double normalize_bearing(double deg);

struct Circle {
    Vec2 center;
    double radius = 0;
    bool operator==(const Circle&) const = default;
};

struct Polygon {
    std::vector<Vec2> vertices;
    bool operator==(const Polygon&) const = default;
};

using Shape = std::variant<Circle, Polygon>;

bool degenerate(const Shape& shape);
// Closed containment: boundary points count as inside.
bool contains(const Shape& shape, Vec2 p);
// Distance from p to the shape boundary, 0 when p is inside.
double surface_distance(const Shape& shape, Vec2 p);
// Circle center for circles, vertex mean for polygons.
Vec2 centroid(const Shape& shape);
// Smallest t >= 0 with origin + t*dir on the shape; 0 when origin is inside.
// dir must be a unit vector.
std::optional<double> ray_hit(const Shape& shape, Vec2 origin, Vec2 dir);
// True when a disc of the given radius at center cuts into the shape interior.
// Touching is allowed.
bool disc_overlaps(const Shape& shape, Vec2 center, double radius);

}  // namespace rcs::sim
