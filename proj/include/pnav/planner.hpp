#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnav/geometry.hpp"
#include "pnav/world.hpp"

namespace pnav {

/// Fixed waypoint path. Frozen after planning: traversal never replans.
struct Trajectory {
    std::vector<Point3> waypoints;
    std::vector<Segment> edges;   // edge i joins waypoint i and i+1
    double total_length = 0.0;

    static Trajectory from_waypoints(std::vector<Point3> pts);

    std::uint64_t hash() const;
};

/// Consecutive waypoints joined by straight segments, order preserved.
std::vector<Segment> connect(const std::vector<Point3>& waypoints);

enum class PlannerAlgorithm {
    rrt_star,
    straight_line,
};

struct PlannerConfig {
    PlannerAlgorithm algorithm = PlannerAlgorithm::rrt_star;
    int max_iterations = 4000;
    double steer_step = 0.7;
    double neighborhood_radius = 2.0;   // shrinking-ball constant
    double goal_bias = 0.1;
    double goal_tolerance = 0.5;
    double resample_spacing = 0.5;
    bool planar = false;                // keep z fixed at the start height
    std::uint64_t seed = 1;
};

struct PlanningFailed : std::runtime_error {
    explicit PlanningFailed(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidEndpoint : std::runtime_error {
    explicit InvalidEndpoint(const std::string& what) : std::runtime_error(what) {}
};

/// Plan against static obstacles and bounds only; moving obstacles are not
/// consulted. The returned path is resampled to near-uniform edge lengths.
Trajectory plan(const World& world, const Point3& start, const Point3& goal,
                const PlannerConfig& cfg);

/// Subdivide each edge into near-uniform pieces no longer than spacing.
/// Geometry is preserved exactly, so collision-free paths stay collision-free.
Trajectory resample(const Trajectory& traj, double spacing);

void save_trajectory(const Trajectory& traj, std::ostream& out);
Trajectory load_trajectory(std::istream& in);
void save_trajectory_file(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory_file(const std::string& path);

} // namespace pnav
