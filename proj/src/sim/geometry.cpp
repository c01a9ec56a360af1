#include "rcs/sim/geometry.hpp"

#include <algorithm>
#include <limits>

namespace rcs::sim {

namespace {

constexpr double kContactTolerance = 1e-9;

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

bool polygon_contains(const Polygon& poly, Vec2 p) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if (segment_distance(p, v[j], v[i]) <= 1e-12) return true;
        const bool crosses = (v[i].y > p.y) != (v[j].y > p.y);
        if (crosses) {
            const double x_at = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

double polygon_edge_distance(const Polygon& poly, Vec2 p) {
    const auto& v = poly.vertices;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        best = std::min(best, segment_distance(p, v[j], v[i]));
    }
    return best;
}

}  // namespace

Vec2 unit(double heading_deg) {
    const double h = normalize_heading(heading_deg);
    // Exact axes keep right-angle manoeuvres free of trig rounding.
    if (h == 0.0) return {1.0, 0.0};
    if (h == 90.0) return {0.0, 1.0};
    if (h == 180.0) return {-1.0, 0.0};
    if (h == 270.0) return {0.0, -1.0};
    const double r = deg2rad(h);
    return {std::cos(r), std::sin(r)};
}

double normalize_heading(double deg) {
    double h = std::fmod(deg, 360.0);
    if (h < 0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    return h;
}

double normalize_bearing(double deg) {
    double b = normalize_heading(deg);
    if (b > 180.0) b -= 360.0;
    return b;
}

bool degenerate(const Shape& shape) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        return !(c->radius > 0) || !std::isfinite(c->radius);
    }
    const auto& v = std::get<Polygon>(shape).vertices;
    if (v.size() < 3) return true;
    double area2 = 0;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) area2 += cross(v[j], v[i]);
    return std::abs(area2) <= 1e-12;
}

bool contains(const Shape& shape, Vec2 p) {
    if (const auto* c = std::get_if<Circle>(&shape)) return norm(p - c->center) <= c->radius;
    return polygon_contains(std::get<Polygon>(shape), p);
}

double surface_distance(const Shape& shape, Vec2 p) {
    if (const auto* c = std::get_if<Circle>(&shape)) return std::max(0.0, norm(p - c->center) - c->radius);
    const auto& poly = std::get<Polygon>(shape);
    if (polygon_contains(poly, p)) return 0.0;
    return polygon_edge_distance(poly, p);
}

Vec2 centroid(const Shape& shape) {
    if (const auto* c = std::get_if<Circle>(&shape)) return c->center;
    const auto& v = std::get<Polygon>(shape).vertices;
    Vec2 sum;
    for (const auto& p : v) sum = sum + p;
    return (1.0 / static_cast<double>(v.size())) * sum;
}

std::optional<double> ray_hit(const Shape& shape, Vec2 origin, Vec2 dir) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        const Vec2 f = origin - c->center;
        const double b = dot(f, dir);
        const double cc = dot(f, f) - c->radius * c->radius;
        if (cc <= 0) return 0.0;
        const double disc = b * b - cc;
        if (disc < 0) return std::nullopt;
        const double t = -b - std::sqrt(disc);
        if (t < 0) return std::nullopt;
        return t;
    }
    const auto& poly = std::get<Polygon>(shape);
    if (polygon_contains(poly, origin)) return 0.0;
    const auto& v = poly.vertices;
    std::optional<double> best;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        const Vec2 a = v[j];
        const Vec2 e = v[i] - a;
        const double denom = cross(dir, e);
        if (denom == 0) continue;
        const Vec2 ao = a - origin;
        const double t = cross(ao, e) / denom;
        const double s = cross(ao, dir) / denom;
        if (t >= 0 && s >= 0 && s <= 1 && (!best || t < *best)) best = t;
    }
    return best;
}

bool disc_overlaps(const Shape& shape, Vec2 center, double radius) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        return norm(center - c->center) < c->radius + radius - kContactTolerance;
    }
    const auto& poly = std::get<Polygon>(shape);
    if (polygon_contains(poly, center)) return true;
    return polygon_edge_distance(poly, center) < radius - kContactTolerance;
}

}  // namespace rcs::sim
