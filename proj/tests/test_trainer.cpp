#include <doctest.h>

#include <cmath>
#include <vector>

#include "pnav/trainer.hpp"

using namespace pnav;

namespace {

// Straight path along x with unit-length edges: (0,0,0) .. (n,0,0).
Trajectory line_trajectory(int n_edges) {
    std::vector<Point3> pts;
    for (int i = 0; i <= n_edges; ++i) pts.push_back({static_cast<double>(i), 0, 0});
    return Trajectory::from_waypoints(std::move(pts));
}

// World whose obstacles sit at fixed spots forever (scripted, single keyframe).
// Proximity radius is collision_radius alone so parked obstacles touch exactly
// the edge they sit on.
World parked_world(const std::vector<Point3>& spots, std::uint64_t seed = 1) {
    WorldConfig cfg;
    cfg.n_moving = static_cast<int>(spots.size());
    cfg.n_static = 0;
    cfg.obstacle_radius = 0.0;
    cfg.collision_radius = 0.3;
    cfg.seed = seed;
    World w = spawn(cfg);
    for (std::size_t i = 0; i < spots.size(); ++i) {
        w.moving[i].mode = MotionMode::scripted;
        w.moving[i].script = {{0.0, spots[i]}};
        w.moving[i].body.radius = 0.0;
    }
    return w;
}

} // namespace

TEST_CASE("train: empty world fits all-zero rates") {
    const World w = parked_world({});
    const Trajectory traj = line_trajectory(4);
    const TrainedModel m = train(w, traj, {10, 1.0, 0});
    CHECK(m.lambda_x.lambda == 0.0);
    CHECK(m.lambda_x.unit == RateUnit::per_meter);
    REQUIRE(m.lambda_y.size() == 4);
    for (const auto& ly : m.lambda_y) CHECK(ly.lambda == 0.0);
    CHECK(m.trajectory_hash == traj.hash());
    CHECK(m.trajectory_log.counts == std::vector<int>(10, 0));
}

TEST_CASE("train: obstacle parked on edge 3 gives lambda_y[3] = 1, others 0") {
    const Trajectory traj = line_trajectory(5);
    const World w = parked_world({{3.5, 0, 0}});
    const TrainedModel m = train(w, traj, {10, 1.0, 0});
    REQUIRE(m.lambda_y.size() == 5);
    for (std::size_t i = 0; i < m.lambda_y.size(); ++i) {
        CHECK(m.lambda_y[i].lambda == (i == 3 ? 1.0 : 0.0));
    }
    // One deduplicated collision per snapshot over D = 5.
    CHECK(m.lambda_x.lambda == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
}

TEST_CASE("train: the spatial closed form, countDist=30, n=10, D=15") {
    const Trajectory traj = line_trajectory(15);
    // Three obstacles parked on three distinct edges: 3 per snapshot, 30 total.
    const World w = parked_world({{1.5, 0, 0}, {7.5, 0, 0}, {13.5, 0, 0}});
    const TrainedModel m = train(w, traj, {10, 1.0, 0});
    long long count_dist = 0;
    for (int c : m.trajectory_log.counts) count_dist += c;
    CHECK(count_dist == 30);
    CHECK(m.lambda_x.lambda == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("train: rate identities hold on a live world") {
    WorldConfig cfg;
    cfg.n_moving = 25;
    cfg.n_static = 0;
    cfg.seed = 77;
    const World w = spawn(cfg);
    const Trajectory traj = line_trajectory(4);
    const TrainingConfig tc{12, 1.0, 0};
    const TrainedModel m = train(w, traj, tc);

    long long total = 0;
    for (int c : m.trajectory_log.counts) total += c;
    const double n = 12.0;
    CHECK(m.lambda_x.lambda * m.total_length * n == doctest::Approx(total).epsilon(1e-9));

    double edge_sum = 0.0;
    for (const auto& ly : m.lambda_y) edge_sum += ly.lambda;
    CHECK(edge_sum * n >= m.lambda_x.lambda * m.total_length * n - 1e-9);

    // Determinism, and the input world is left untouched.
    const World w2 = spawn(cfg);
    CHECK(w == w2);
    const TrainedModel m2 = train(w, traj, tc);
    CHECK(m2.lambda_x.lambda == m.lambda_x.lambda);
    CHECK(m2.trajectory_log.counts == m.trajectory_log.counts);
}

TEST_CASE("train: reseeded training world differs from the evaluated one") {
    WorldConfig cfg;
    cfg.n_moving = 25;
    cfg.n_static = 0;
    cfg.seed = 5;
    const World w = spawn(cfg);
    const Trajectory traj = line_trajectory(4);
    const TrainedModel same = train(w, traj, {10, 1.0, 0});
    const TrainedModel reseeded = train(w, traj, {10, 1.0, 999});
    CHECK(same.trajectory_log.counts != reseeded.trajectory_log.counts);
}

TEST_CASE("train: degenerate trajectories are rejected") {
    const World w = parked_world({});
    CHECK_THROWS_AS(train(w, Trajectory::from_waypoints({{1, 1, 1}}), {10, 1.0, 0}),
                    DegenerateTrajectory);
}

TEST_CASE("train: doubling n moves fitted rates by < 3 standard errors") {
    // Stationary setup: targets stay inside bounds and the field gets a long
    // burn-in before observation.
    WorldConfig cfg;
    cfg.n_moving = 30;
    cfg.n_static = 0;
    cfg.waypoint_inflation = 1.0;
    const Trajectory traj = line_trajectory(4);

    const int seeds = 24;
    std::vector<double> fit_n, fit_2n;
    for (int s = 1; s <= seeds; ++s) {
        cfg.seed = static_cast<std::uint64_t>(s);
        World w = spawn(cfg);
        w.step(100.0);
        fit_n.push_back(train(w, traj, {10, 1.0, 0}).lambda_x.lambda);
        fit_2n.push_back(train(w, traj, {20, 1.0, 0}).lambda_x.lambda);
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / v.size();
    };
    auto var = [&](const std::vector<double>& v) {
        const double m = mean(v);
        double ss = 0.0;
        for (double x : v) ss += (x - m) * (x - m);
        return ss / (v.size() - 1);
    };
    const double diff = std::abs(mean(fit_n) - mean(fit_2n));
    const double se = std::sqrt(var(fit_n) / seeds + var(fit_2n) / seeds);
    CHECK(diff < 3.0 * se);
}

TEST_CASE("trained model JSON round trip") {
    const Trajectory traj = line_trajectory(5);
    const World w = parked_world({{3.5, 0, 0}, {1.2, 0, 0}});
    const TrainedModel m = train(w, traj, {10, 1.0, 0});
    const TrainedModel back = TrainedModel::from_json(m.to_json());
    CHECK(back.lambda_x.lambda == m.lambda_x.lambda);
    REQUIRE(back.lambda_y.size() == m.lambda_y.size());
    for (std::size_t i = 0; i < m.lambda_y.size(); ++i) {
        CHECK(back.lambda_y[i].lambda == m.lambda_y[i].lambda);
    }
    CHECK(back.trajectory_hash == m.trajectory_hash);
    CHECK(back.n_timestamps == m.n_timestamps);
    CHECK(back.trajectory_log.counts == m.trajectory_log.counts);
    REQUIRE(back.edge_logs.size() == m.edge_logs.size());
    CHECK(back.edge_logs[3].counts == m.edge_logs[3].counts);
}

TEST_CASE("train: interval normalization feeds per-second rates") {
    const Trajectory traj = line_trajectory(5);
    const World w = parked_world({{3.5, 0, 0}});
    TrainingConfig tc;
    tc.n_timestamps = 8;
    tc.observation_interval = 2.0;
    const TrainedModel m = train(w, traj, tc);
    CHECK(m.lambda_y[3].lambda == 1.0);                       // per interval
    CHECK(m.lambda_y_per_second(3) == doctest::Approx(0.5));  // per second
}
