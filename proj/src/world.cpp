#include "pnav/world.hpp"

#include <algorithm>
#include <cmath>

#include "pnav/random.hpp"

namespace pnav {

namespace {

Point3 uniform_point(std::mt19937_64& rng, const Aabb& box) {
    // Component draw order is part of the deterministic contract.
    const double x = uniform_range(rng, box.min.x, box.max.x);
    const double y = uniform_range(rng, box.min.y, box.max.y);
    const double z = uniform_range(rng, box.min.z, box.max.z);
    return {x, y, z};
}

void draw_leg(MovingObstacle& ob, const WorldConfig& cfg, double now) {
    const Aabb target_box = cfg.bounds.inflated(cfg.waypoint_inflation);
    Point3 target = uniform_point(ob.rng, target_box);
    double speed = uniform_range(ob.rng, cfg.obstacle_speed_min, cfg.obstacle_speed_max);
    while (distance(target, ob.leg_origin) < 1e-9) {
        target = uniform_point(ob.rng, target_box);
        speed = uniform_range(ob.rng, cfg.obstacle_speed_min, cfg.obstacle_speed_max);
    }
    ob.leg_target = target;
    ob.leg_speed = speed;
    ob.leg_start_time = now;
}

void advance_obstacle(MovingObstacle& ob, const WorldConfig& cfg, double t) {
    if (ob.mode != MotionMode::random_waypoint) return;
    // Process leg arrivals up to time t; each arrival consumes RNG draws in a
    // fixed order, independent of how callers partitioned the time axis.
    for (;;) {
        const double leg_len = distance(ob.leg_target, ob.leg_origin);
        const double t_arrive = ob.leg_start_time + leg_len / ob.leg_speed;
        if (t_arrive > t) break;
        ob.leg_origin = ob.leg_target;
        draw_leg(ob, cfg, t_arrive);
    }
}

Point3 script_position(const std::vector<ScriptKeyframe>& script, double t) {
    if (script.empty()) return {};
    if (t <= script.front().t) return script.front().pos;
    if (t >= script.back().t) return script.back().pos;
    for (std::size_t i = 1; i < script.size(); ++i) {
        if (t <= script[i].t) {
            const auto& k0 = script[i - 1];
            const auto& k1 = script[i];
            const double span = k1.t - k0.t;
            const double u = span > 0.0 ? (t - k0.t) / span : 0.0;
            return k0.pos + (k1.pos - k0.pos) * u;
        }
    }
    return script.back().pos;
}

} // namespace

Point3 MovingObstacle::position(double t) const {
    switch (mode) {
    case MotionMode::scripted:
        return script_position(script, t);
    case MotionMode::straight_line:
    case MotionMode::random_waypoint: {
        const double leg_len = distance(leg_target, leg_origin);
        if (leg_len == 0.0 || leg_speed == 0.0) return leg_origin;
        const double travelled = std::min(leg_speed * (t - leg_start_time), leg_len);
        return leg_origin + (leg_target - leg_origin) * (travelled / leg_len);
    }
    }
    return leg_origin;
}

Point3 MovingObstacle::velocity(double t) const {
    switch (mode) {
    case MotionMode::scripted: {
        const double h = 1e-3;
        return (script_position(script, t + h) - script_position(script, t)) * (1.0 / h);
    }
    case MotionMode::straight_line:
    case MotionMode::random_waypoint: {
        const double leg_len = distance(leg_target, leg_origin);
        if (leg_len == 0.0 || leg_speed == 0.0) return {};
        if (leg_speed * (t - leg_start_time) >= leg_len) return {};
        return (leg_target - leg_origin) * (leg_speed / leg_len);
    }
    }
    return {};
}

bool MovingObstacle::operator==(const MovingObstacle& o) const {
    return id == o.id && body.center == o.body.center && body.radius == o.body.radius &&
           mode == o.mode && leg_origin == o.leg_origin && leg_target == o.leg_target &&
           leg_speed == o.leg_speed && leg_start_time == o.leg_start_time && rng == o.rng;
}

bool World::operator==(const World& o) const {
    if (clock != o.clock || moving.size() != o.moving.size()) return false;
    for (std::size_t i = 0; i < moving.size(); ++i) {
        if (!(moving[i] == o.moving[i])) return false;
        if (!(moving[i].position(clock) == o.moving[i].position(o.clock))) return false;
    }
    return true;
}

void World::step(double dt) {
    if (dt <= 0.0) return;
    clock += dt;
    for (auto& ob : moving) {
        advance_obstacle(ob, config, clock);
        ob.body.center = ob.position(clock);
    }
}

World spawn(const WorldConfig& config) {
    World w;
    w.config = config;
    w.bounds = config.bounds;

    std::mt19937_64 rng(mix_seed(config.seed, 0));

    // Static boxes live in the interior so corner start/goal regions stay open.
    const double h = config.static_half_extent;
    const Point3 ext = config.bounds.max - config.bounds.min;
    const double margin = h + 0.2 * std::min({ext.x, ext.y, ext.z});
    Aabb center_region = {config.bounds.min + Point3{margin, margin, margin},
                          config.bounds.max - Point3{margin, margin, margin}};
    if (center_region.min.x > center_region.max.x || center_region.min.y > center_region.max.y ||
        center_region.min.z > center_region.max.z) {
        if (config.n_static > 0) throw SpawnError("bounds too small for static obstacles");
    }
    for (int i = 0; i < config.n_static; ++i) {
        const Point3 c = uniform_point(rng, center_region);
        w.static_obstacles.push_back({c - Point3{h, h, h}, c + Point3{h, h, h}});
    }

    // Free-space sanity check: a workspace with no room left cannot host a
    // start or goal.
    if (config.n_static > 0) {
        int free_hits = 0;
        std::mt19937_64 probe(mix_seed(config.seed, 1));
        for (int i = 0; i < 512; ++i) {
            const Point3 p = uniform_point(probe, config.bounds);
            bool inside = false;
            for (const auto& box : w.static_obstacles) {
                if (box.contains(p)) { inside = true; break; }
            }
            if (!inside) ++free_hits;
        }
        if (free_hits < 16) throw SpawnError("static obstacles leave no free space for start/goal");
    }

    for (int i = 0; i < config.n_moving; ++i) {
        MovingObstacle ob;
        ob.id = i;
        ob.mode = config.motion_mode;
        ob.body.radius = config.obstacle_radius;
        ob.leg_origin = uniform_point(rng, config.bounds);
        ob.body.center = ob.leg_origin;
        ob.leg_start_time = 0.0;
        ob.rng.seed(mix_seed(config.seed, 0x100 + static_cast<std::uint64_t>(i)));
        if (config.motion_mode == MotionMode::random_waypoint) {
            draw_leg(ob, config, 0.0);
        } else if (config.motion_mode == MotionMode::straight_line) {
            // Fixed heading: one far-away target, never redrawn.
            const Aabb far_box = config.bounds.inflated(100.0);
            ob.leg_target = uniform_point(ob.rng, far_box);
            ob.leg_speed = uniform_range(ob.rng, config.obstacle_speed_min, config.obstacle_speed_max);
            if (distance(ob.leg_target, ob.leg_origin) < 1e-9) ob.leg_target = ob.leg_origin + Point3{1.0, 0.0, 0.0};
        }
        w.moving.push_back(std::move(ob));
    }
    return w;
}

World reseed_moving(const World& w, std::uint64_t seed) {
    WorldConfig cfg = w.config;
    cfg.seed = seed;
    World fresh = spawn(cfg);
    fresh.static_obstacles = w.static_obstacles;
    fresh.clock = w.clock;
    for (auto& ob : fresh.moving) {
        ob.leg_start_time = w.clock;
    }
    return fresh;
}

int collision_count(const World& w, std::span<const Segment> edges) {
    int count = 0;
    for (const auto& ob : w.moving) {
        const Sphere reach{ob.position(w.clock), w.effective_radius(ob)};
        for (const auto& e : edges) {
            if (segment_intersects_sphere(e, reach)) {
                ++count;
                break;
            }
        }
    }
    return count;
}

std::vector<int> per_edge_collision_counts(const World& w, std::span<const Segment> edges) {
    std::vector<int> counts(edges.size(), 0);
    for (const auto& ob : w.moving) {
        const Sphere reach{ob.position(w.clock), w.effective_radius(ob)};
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (segment_intersects_sphere(edges[i], reach)) ++counts[i];
        }
    }
    return counts;
}

} // namespace pnav
