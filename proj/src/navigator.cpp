#include "pnav/navigator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "pnav/hash.hpp"
#include "pnav/stochastic.hpp"

namespace pnav {

namespace {

/// Steps the world and the robot together. The robot's position along an
/// edge is a pure function of mission time, so the same trajectory sampled
/// with the same tick sizes reproduces bit-identical traces.
class TraversalSim {
public:
    TraversalSim(World world, TraversalReport& report)
        : world_(std::move(world)), report_(report), start_clock_(world_.clock) {
        inside_.assign(world_.moving.size(), false);
    }

    double mission_time() const { return world_.clock - start_clock_; }

    void sample_instant(const Point3& robot_pos) {
        double min_surf = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < world_.moving.size(); ++i) {
            const auto& ob = world_.moving[i];
            const double d = distance(ob.position(world_.clock), robot_pos);
            min_surf = std::min(min_surf, std::max(0.0, d - ob.body.radius));
            const bool inside_now = d <= world_.effective_radius(ob);
            if (inside_now && !inside_[i]) ++report_.actual_collisions;
            inside_[i] = inside_now;
        }
        if (world_.moving.empty()) min_surf = std::numeric_limits<double>::infinity();
        report_.trace.push_back({mission_time(), min_surf});
    }

    /// Move along one edge at constant speed, sampling at every world tick.
    void traverse_edge(const Segment& edge, double speed) {
        const double len = edge.length();
        if (len == 0.0) return;
        const Point3 dir = (edge.b - edge.a) * (1.0 / len);
        const double t_edge = len / speed;
        const double dt = world_.config.dt;
        const double t0 = mission_time();

        double local = 0.0;
        while (local < t_edge) {
            const double chunk = std::min(dt, t_edge - local);
            world_.step(chunk);
            local = mission_time() - t0;
            const Point3 robot = edge.a + dir * (speed * std::min(local, t_edge));
            sample_instant(robot);
            if (chunk < dt) break;   // final partial tick
        }
    }

    /// Hold position without exposure: the robot loiters off the corridor, so
    /// nothing is logged and hysteresis state is frozen while the world moves.
    void hold(double duration) {
        const double dt = world_.config.dt;
        double remaining = duration;
        while (remaining > 0.0) {
            const double chunk = std::min(dt, remaining);
            world_.step(chunk);
            remaining -= chunk;
        }
    }

private:
    World world_;
    TraversalReport& report_;
    double start_clock_ = 0.0;
    std::vector<bool> inside_;
};

TraversalReport run_traversal(const World& world, const Trajectory& traj,
                              const TrainedModel* model, const NavigatorConfig& cfg,
                              bool adjustments_enabled) {
    TraversalReport report;
    report.trajectory_hash = traj.hash();
    report.mode = !adjustments_enabled ? "control"
                  : cfg.mode == AvoidanceMode::delay_entry ? "delay_entry"
                                                           : "verbatim";

    TraversalSim sim(world, report);
    if (!traj.waypoints.empty()) {
        sim.sample_instant(traj.waypoints.front());
    }

    for (std::size_t i = 0; i < traj.edges.size(); ++i) {
        const Segment& edge = traj.edges[i];
        const double len = edge.length();

        EdgeDecision dec;
        dec.index = static_cast<int>(i);
        dec.length_m = len;
        double speed = cfg.initial_speed;

        if (model != nullptr) {
            const double lam_x_prime = model->lambda_x.lambda * len;
            const double lam_y_sec = model->lambda_y_per_second(i);
            double t_edge = len / speed;
            double p_temporal = -std::expm1(-lam_y_sec * t_edge);

            dec.lambda_x_prime = lam_x_prime;
            dec.p_spatial = prob_at_least_one({lam_x_prime, RateUnit::per_interval});

            if (adjustments_enabled && dec.p_spatial >= cfg.threshold) {
                dec.risky = true;
                if (cfg.mode == AvoidanceMode::delay_entry) {
                    // Each hold lets one expected arrival pass; the residual
                    // risk is then the chance of even more arrivals landing
                    // inside the traversal window.
                    const PoissonModel window{lam_y_sec * t_edge, RateUnit::per_interval};
                    int waited_out = 0;
                    while (p_temporal >= cfg.threshold &&
                           dec.adjust_iterations < cfg.max_adjust_iterations) {
                        const double w = 1.0 / lam_y_sec;
                        sim.hold(w);
                        dec.wait_s += w;
                        ++dec.adjust_iterations;
                        ++waited_out;
                        p_temporal = prob_more_than(window, waited_out);
                    }
                } else {
                    while (p_temporal >= cfg.threshold &&
                           dec.adjust_iterations < cfg.max_adjust_iterations &&
                           speed > cfg.min_speed) {
                        speed = cfg.decrement == SpeedDecrement::multiplicative
                                    ? speed * cfg.decrement_factor
                                    : speed - cfg.decrement_delta;
                        speed = std::max(speed, cfg.min_speed);
                        t_edge = len / speed;
                        p_temporal = -std::expm1(-lam_y_sec * t_edge);
                        ++dec.adjust_iterations;
                    }
                    if (p_temporal >= cfg.threshold) speed = cfg.min_speed;
                }
                dec.exhausted = p_temporal >= cfg.threshold;
            }
            dec.lambda_y_prime = lam_y_sec * (len / speed);
            dec.p_temporal = p_temporal;
        }

        dec.speed_mps = speed;
        sim.traverse_edge(edge, speed);

        report.adjustment_count += dec.adjust_iterations;
        report.any_exhausted = report.any_exhausted || dec.exhausted;
        report.edges.push_back(dec);
    }

    report.total_time_s = sim.mission_time();
    double closest = std::numeric_limits<double>::infinity();
    for (const auto& s : report.trace) closest = std::min(closest, s.min_dist);
    report.closest_distance_m = report.trace.empty() || !std::isfinite(closest) ? 0.0 : closest;
    return report;
}

} // namespace

TraversalReport traverse(const World& world, const Trajectory& traj,
                         const TrainedModel& model, const NavigatorConfig& cfg) {
    if (!(cfg.threshold > 0.0 && cfg.threshold <= 1.0)) {
        throw std::invalid_argument("threshold must lie in (0, 1]");
    }
    if (!(cfg.min_speed > 0.0 && cfg.min_speed <= cfg.initial_speed)) {
        throw std::invalid_argument("need 0 < min_speed <= initial_speed");
    }
    if (model.trajectory_hash != traj.hash() || model.lambda_y.size() != traj.edges.size()) {
        throw ModelMismatch{};
    }
    return run_traversal(world, traj, &model, cfg, true);
}

TraversalReport control_run(const World& world, const Trajectory& traj, double speed) {
    NavigatorConfig cfg;
    cfg.initial_speed = speed;
    return run_traversal(world, traj, nullptr, cfg, false);
}

std::string TraversalReport::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["mode"] = mode;
    j["trajectory_hash"] = hash_to_hex(trajectory_hash);
    j["actual_collisions"] = actual_collisions;
    j["possible_collisions"] = possible_collisions;
    j["closest_distance_m"] = closest_distance_m;
    j["total_time_s"] = total_time_s;
    j["adjustment_count"] = adjustment_count;
    j["any_exhausted"] = any_exhausted;
    nlohmann::json edges_json = nlohmann::json::array();
    for (const auto& e : edges) {
        edges_json.push_back({{"index", e.index},
                              {"length_m", e.length_m},
                              {"speed_mps", e.speed_mps},
                              {"wait_s", e.wait_s},
                              {"lambda_x_prime", e.lambda_x_prime},
                              {"lambda_y_prime", e.lambda_y_prime},
                              {"p_spatial", e.p_spatial},
                              {"p_temporal", e.p_temporal},
                              {"risky", e.risky},
                              {"exhausted", e.exhausted},
                              {"adjust_iterations", e.adjust_iterations}});
    }
    j["edges"] = edges_json;
    return j.dump(2);
}

void TraversalReport::save_trace_csv(std::ostream& out) const {
    out << "t,min_dist\n";
    for (const auto& s : trace) {
        out << s.t << ',' << (std::isfinite(s.min_dist) ? s.min_dist : -1.0) << '\n';
    }
}

} // namespace pnav
