#include "pnav/geometry.hpp"

#include <algorithm>

namespace pnav {

double distance_point_segment(const Point3& p, const Segment& s) {
    const Point3 d = s.b - s.a;
    const double dd = dot(d, d);
    if (dd == 0.0) {
        return distance(p, s.a);
    }
    const double t = std::clamp(dot(p - s.a, d) / dd, 0.0, 1.0);
    return distance(p, s.a + d * t);
}

bool segment_intersects_sphere(const Segment& s, const Sphere& o) {
    return distance_point_segment(o.center, s) <= o.radius;
}

bool segment_intersects_aabb(const Segment& s, const Aabb& b) {
    // Slab clipping of p(t) = a + t(b-a), t in [0,1]. Axes with zero
    // direction reject immediately when the origin lies outside the slab.
    const Point3 d = s.b - s.a;
    double t0 = 0.0;
    double t1 = 1.0;

    const double dir[3] = {d.x, d.y, d.z};
    const double org[3] = {s.a.x, s.a.y, s.a.z};
    const double lo[3] = {b.min.x, b.min.y, b.min.z};
    const double hi[3] = {b.max.x, b.max.y, b.max.z};

    for (int axis = 0; axis < 3; ++axis) {
        if (dir[axis] == 0.0) {
            if (org[axis] < lo[axis] || org[axis] > hi[axis]) return false;
            continue;
        }
        double ta = (lo[axis] - org[axis]) / dir[axis];
        double tb = (hi[axis] - org[axis]) / dir[axis];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

} // namespace pnav
