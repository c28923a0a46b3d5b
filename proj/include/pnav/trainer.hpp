#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnav/planner.hpp"
#include "pnav/stochastic.hpp"
#include "pnav/world.hpp"

namespace pnav {

struct TrainingConfig {
    int n_timestamps = 10;
    double observation_interval = 1.0;   // seconds of simulated time per snapshot
    // Nonzero: observe a moving-obstacle redraw of the world instead of the
    // exact realization handed in, so training never leaks the evaluated future.
    std::uint64_t seed = 0;
};

/// Offline-fitted collision rates for one frozen trajectory: one spatial rate
/// for the whole path (per meter) and one temporal rate per edge (per
/// observation interval).
struct TrainedModel {
    PoissonModel lambda_x;                    // per_meter
    std::vector<PoissonModel> lambda_y;       // per_interval, one per edge
    int n_timestamps = 0;
    double observation_interval = 1.0;
    double total_length = 0.0;
    ObservationLog trajectory_log;
    std::vector<ObservationLog> edge_logs;
    std::uint64_t trajectory_hash = 0;

    /// Edge rate normalized to events per second.
    double lambda_y_per_second(std::size_t i) const {
        return lambda_y[i].lambda / observation_interval;
    }

    std::string to_json() const;
    static TrainedModel from_json(const std::string& text);
    void save(const std::string& path) const;
    static TrainedModel load(const std::string& path);
};

struct DegenerateTrajectory : std::runtime_error {
    DegenerateTrajectory() : std::runtime_error("trajectory has no edges to train on") {}
};

/// Observe the trajectory over n snapshots spaced observation_interval apart
/// and fit both rate families. The world handed in is never mutated.
TrainedModel train(const World& world, const Trajectory& traj, const TrainingConfig& cfg);

} // namespace pnav
