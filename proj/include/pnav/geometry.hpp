#pragma once

#include <cmath>

namespace pnav {

/// 3D point / vector in meters. Components must stay finite.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Point3& o) const = default;
};

inline double dot(const Point3& a, const Point3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm(const Point3& v) { return std::sqrt(dot(v, v)); }

inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }

inline bool is_finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

/// Straight line segment between two points. a == b is a valid degenerate segment.
struct Segment {
    Point3 a;
    Point3 b;

    double length() const { return distance(a, b); }
};

struct Sphere {
    Point3 center;
    double radius = 0.0;
};

/// Axis-aligned box, min <= max componentwise. Used for the workspace bounds
/// and for static obstacles.
struct Aabb {
    Point3 min;
    Point3 max;

    bool contains(const Point3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
               p.z >= min.z && p.z <= max.z;
    }

    Point3 center() const { return (min + max) * 0.5; }
    Point3 half_extent() const { return (max - min) * 0.5; }

    /// Box grown by the same factor along every axis about its center.
    Aabb inflated(double factor) const {
        const Point3 c = center();
        const Point3 h = half_extent() * factor;
        return {c - h, c + h};
    }
};

/// min over t in [0,1] of |p - (a + t(b-a))|. Degenerate segments give |p - a|.
double distance_point_segment(const Point3& p, const Segment& s);

/// Boundary-inclusive: contact at exactly the radius counts as intersection.
bool segment_intersects_sphere(const Segment& s, const Sphere& o);

/// True iff any point of the segment lies inside or on the box (slab clipping).
bool segment_intersects_aabb(const Segment& s, const Aabb& b);

} // namespace pnav
