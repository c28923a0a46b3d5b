#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnav/planner.hpp"
#include "pnav/trainer.hpp"
#include "pnav/world.hpp"

namespace pnav {

enum class AvoidanceMode {
    verbatim,      // the printed adjustment loop: slow down, guard on iterations
    delay_entry,   // postpone edge entry by expected inter-arrival times
};

enum class SpeedDecrement {
    multiplicative,
    subtractive,
};

struct NavigatorConfig {
    double threshold = 0.2;
    double initial_speed = 1.0;
    SpeedDecrement decrement = SpeedDecrement::multiplicative;
    double decrement_factor = 0.8;
    double decrement_delta = 0.1;
    double min_speed = 0.05;
    int max_adjust_iterations = 64;
    AvoidanceMode mode = AvoidanceMode::delay_entry;
};

/// Gate evaluation and outcome for one edge.
struct EdgeDecision {
    int index = 0;
    double length_m = 0.0;
    double speed_mps = 0.0;
    double wait_s = 0.0;
    double lambda_x_prime = 0.0;   // spatial rate scaled by edge length
    double lambda_y_prime = 0.0;   // temporal rate scaled by traversal time
    double p_spatial = 0.0;
    double p_temporal = 0.0;       // probability in force at edge entry
    bool risky = false;            // spatial gate fired
    bool exhausted = false;        // adjustment loop gave up
    int adjust_iterations = 0;
};

struct TraceSample {
    double t = 0.0;
    double min_dist = 0.0;   // robot to nearest obstacle surface, clamped at 0
};

struct TraversalReport {
    std::string mode;
    std::vector<EdgeDecision> edges;
    int actual_collisions = 0;
    int possible_collisions = 0;   // filled from a paired control run
    double closest_distance_m = 0.0;
    double total_time_s = 0.0;
    int adjustment_count = 0;
    bool any_exhausted = false;
    std::uint64_t trajectory_hash = 0;
    std::vector<TraceSample> trace;

    std::string to_json() const;
    void save_trace_csv(std::ostream& out) const;
};

struct ModelMismatch : std::runtime_error {
    ModelMismatch() : std::runtime_error("trained model does not match this trajectory") {}
};

/// Walk the trajectory edge by edge, gating each entry on the trained
/// collision probabilities and adjusting per the configured avoidance mode.
/// The world handed in is never mutated; the traversal owns a clone.
TraversalReport traverse(const World& world, const Trajectory& traj,
                         const TrainedModel& model, const NavigatorConfig& cfg);

/// Same simulation with every adjustment disabled. Its collision count
/// defines the "possible collisions" of a paired treatment run.
TraversalReport control_run(const World& world, const Trajectory& traj, double speed);

} // namespace pnav
