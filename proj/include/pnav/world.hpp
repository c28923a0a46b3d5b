#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "pnav/geometry.hpp"

namespace pnav {

enum class MotionMode {
    random_waypoint,
    straight_line,
    scripted,
};

struct ScriptKeyframe {
    double t = 0.0;
    Point3 pos;
};

/// A spherical obstacle moving through an unbounded space. Motion is a
/// piecewise-linear world-line evaluated analytically, so positions at a
/// given clock value are identical no matter how the simulation time was
/// partitioned into steps.
struct MovingObstacle {
    int id = 0;
    Sphere body;
    MotionMode mode = MotionMode::random_waypoint;

    // Current leg (random_waypoint / straight_line).
    Point3 leg_origin;
    Point3 leg_target;
    double leg_speed = 0.0;
    double leg_start_time = 0.0;

    std::vector<ScriptKeyframe> script;   // scripted mode, keyframes by time
    std::mt19937_64 rng;                  // private stream, drawn only at leg ends

    Point3 position(double t) const;
    Point3 velocity(double t) const;

    bool operator==(const MovingObstacle& o) const;
};

struct WorldConfig {
    Aabb bounds = {{0.0, 0.0, 0.0}, {5.0, 5.0, 5.0}};
    int n_moving = 20;
    int n_static = 2;
    double obstacle_radius = 0.55;
    double obstacle_speed_min = 0.3;
    double obstacle_speed_max = 1.2;
    double robot_radius = 0.0;
    double collision_radius = 0.3;
    double dt = 0.05;
    // random_waypoint targets are drawn in bounds inflated by this factor, so
    // obstacles spend part of their time outside the workspace.
    double waypoint_inflation = 2.2;
    double static_half_extent = 0.5;
    MotionMode motion_mode = MotionMode::random_waypoint;
    std::uint64_t seed = 1;
};

struct SpawnError : std::runtime_error {
    explicit SpawnError(const std::string& what) : std::runtime_error(what) {}
};

/// Bounded workspace with static boxes and seeded moving obstacles.
/// Copying a World clones the whole obstacle state, RNG streams included, so
/// a copy replays the exact same future.
struct World {
    WorldConfig config;
    Aabb bounds;
    std::vector<Aabb> static_obstacles;
    std::vector<MovingObstacle> moving;
    double clock = 0.0;

    void step(double dt);

    /// Proximity radius at which an obstacle registers against the robot or
    /// its trajectory: collision_radius around the robot-inflated body.
    double effective_radius(const MovingObstacle& ob) const {
        return ob.body.radius + config.robot_radius + config.collision_radius;
    }

    bool operator==(const World& o) const;
};

World spawn(const WorldConfig& config);

/// Same statics and config, moving obstacles redrawn from a new seed.
/// Training observes such a clone so it never replays the evaluation future.
World reseed_moving(const World& w, std::uint64_t seed);

/// Moving obstacles currently touching any edge, each counted at most once.
int collision_count(const World& w, std::span<const Segment> edges);

/// Per-edge touch counts; an obstacle straddling k edges contributes to all k.
std::vector<int> per_edge_collision_counts(const World& w, std::span<const Segment> edges);

} // namespace pnav
