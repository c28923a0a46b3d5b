#include "pnav/planner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pnav/hash.hpp"
#include "pnav/random.hpp"

namespace pnav {

Trajectory Trajectory::from_waypoints(std::vector<Point3> pts) {
    Trajectory t;
    t.waypoints = std::move(pts);
    t.edges = connect(t.waypoints);
    t.total_length = 0.0;
    for (const auto& e : t.edges) t.total_length += e.length();
    return t;
}

std::uint64_t Trajectory::hash() const {
    Fnv1a64 h;
    h.feed(static_cast<std::uint64_t>(waypoints.size()));
    for (const auto& p : waypoints) {
        h.feed(p.x);
        h.feed(p.y);
        h.feed(p.z);
    }
    return h.digest();
}

std::vector<Segment> connect(const std::vector<Point3>& waypoints) {
    std::vector<Segment> edges;
    if (waypoints.size() < 2) return edges;
    edges.reserve(waypoints.size() - 1);
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        edges.push_back({waypoints[i], waypoints[i + 1]});
    }
    return edges;
}

namespace {

bool point_valid(const World& w, const Point3& p) {
    if (!w.bounds.contains(p)) return false;
    for (const auto& box : w.static_obstacles) {
        if (box.contains(p)) return false;
    }
    return true;
}

// Both endpoints inside the (convex) bounds implies the whole segment is.
bool edge_valid(const World& w, const Point3& a, const Point3& b) {
    if (!w.bounds.contains(a) || !w.bounds.contains(b)) return false;
    const Segment s{a, b};
    for (const auto& box : w.static_obstacles) {
        if (segment_intersects_aabb(s, box)) return false;
    }
    return true;
}

struct Node {
    Point3 pos;
    int parent = -1;
    double cost = 0.0;
};

Trajectory extract(const std::vector<Node>& nodes, int best, const Point3& goal) {
    std::vector<Point3> rev;
    rev.push_back(goal);
    for (int i = best; i >= 0; i = nodes[i].parent) rev.push_back(nodes[i].pos);
    std::reverse(rev.begin(), rev.end());
    // Planner may land a node exactly on the goal; drop the duplicate.
    if (rev.size() >= 2 && distance(rev[rev.size() - 2], rev.back()) < 1e-12) rev.pop_back();
    return Trajectory::from_waypoints(std::move(rev));
}

Trajectory plan_rrt_star(const World& world, const Point3& start, const Point3& goal,
                         const PlannerConfig& cfg) {
    std::mt19937_64 rng(mix_seed(cfg.seed, 7));
    std::vector<Node> nodes;
    std::vector<std::vector<int>> children;
    nodes.push_back({start, -1, 0.0});
    children.emplace_back();

    // Rewiring must keep subtree costs exact, otherwise later parent choices
    // compare stale values.
    auto propagate = [&](int root, double delta) {
        std::vector<int> stack{root};
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            nodes[i].cost += delta;
            for (int c : children[i]) stack.push_back(c);
        }
    };

    auto sample = [&]() -> Point3 {
        if (uniform01(rng) < cfg.goal_bias) return goal;
        Point3 p{uniform_range(rng, world.bounds.min.x, world.bounds.max.x),
                 uniform_range(rng, world.bounds.min.y, world.bounds.max.y),
                 uniform_range(rng, world.bounds.min.z, world.bounds.max.z)};
        if (cfg.planar) p.z = start.z;
        return p;
    };

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        const Point3 q = sample();

        int nearest = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double d = distance(nodes[i].pos, q);
            if (d < best_d) {
                best_d = d;
                nearest = static_cast<int>(i);
            }
        }

        Point3 q_new = q;
        if (best_d > cfg.steer_step) {
            q_new = nodes[nearest].pos + (q - nodes[nearest].pos) * (cfg.steer_step / best_d);
        }
        if (best_d < 1e-12) continue;
        if (!point_valid(world, q_new)) continue;
        if (!edge_valid(world, nodes[nearest].pos, q_new)) continue;

        // Shrinking-ball neighborhood, capped at the steer step.
        const double n = static_cast<double>(nodes.size());
        const double ball = std::min(
            cfg.neighborhood_radius * std::cbrt(std::log(n + 1.0) / (n + 1.0)),
            cfg.steer_step);

        int parent = nearest;
        double parent_cost = nodes[nearest].cost + distance(nodes[nearest].pos, q_new);
        std::vector<int> neighbors;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double d = distance(nodes[i].pos, q_new);
            if (d <= ball) neighbors.push_back(static_cast<int>(i));
        }
        for (int i : neighbors) {
            const double c = nodes[i].cost + distance(nodes[i].pos, q_new);
            if (c < parent_cost && edge_valid(world, nodes[i].pos, q_new)) {
                parent = i;
                parent_cost = c;
            }
        }

        const int new_index = static_cast<int>(nodes.size());
        nodes.push_back({q_new, parent, parent_cost});
        children.emplace_back();
        children[parent].push_back(new_index);

        for (int i : neighbors) {
            const double through = parent_cost + distance(q_new, nodes[i].pos);
            if (through < nodes[i].cost && edge_valid(world, q_new, nodes[i].pos)) {
                auto& siblings = children[nodes[i].parent];
                siblings.erase(std::find(siblings.begin(), siblings.end(), i));
                nodes[i].parent = new_index;
                children[new_index].push_back(i);
                propagate(i, through - nodes[i].cost);
            }
        }
    }

    int best = -1;
    double best_total = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double to_goal = distance(nodes[i].pos, goal);
        if (to_goal > cfg.goal_tolerance) continue;
        if (!edge_valid(world, nodes[i].pos, goal)) continue;
        const double total = nodes[i].cost + to_goal;
        if (total < best_total) {
            best_total = total;
            best = static_cast<int>(i);
        }
    }
    if (best < 0) {
        throw PlanningFailed("no node reached the goal region after max_iterations");
    }
    return extract(nodes, best, goal);
}

} // namespace

Trajectory resample(const Trajectory& traj, double spacing) {
    if (traj.edges.empty() || spacing <= 0.0) return traj;
    std::vector<Point3> pts;
    pts.push_back(traj.waypoints.front());
    for (const auto& e : traj.edges) {
        const double len = e.length();
        const int pieces = std::max(1, static_cast<int>(std::ceil(len / spacing)));
        for (int k = 1; k <= pieces; ++k) {
            const double u = static_cast<double>(k) / pieces;
            pts.push_back(e.a + (e.b - e.a) * u);
        }
    }
    return Trajectory::from_waypoints(std::move(pts));
}

Trajectory plan(const World& world, const Point3& start, const Point3& goal,
                const PlannerConfig& cfg) {
    if (!is_finite(start) || !is_finite(goal)) throw InvalidEndpoint("endpoint not finite");
    if (!point_valid(world, start)) throw InvalidEndpoint("start is not collision-free inside bounds");
    if (!point_valid(world, goal)) throw InvalidEndpoint("goal is not collision-free inside bounds");

    if (distance(start, goal) < 1e-12) {
        return Trajectory::from_waypoints({start});
    }

    Trajectory raw;
    switch (cfg.algorithm) {
    case PlannerAlgorithm::straight_line:
        if (!edge_valid(world, start, goal)) {
            throw PlanningFailed("straight line from start to goal is blocked");
        }
        raw = Trajectory::from_waypoints({start, goal});
        break;
    case PlannerAlgorithm::rrt_star:
        raw = plan_rrt_star(world, start, goal, cfg);
        break;
    }
    return resample(raw, cfg.resample_spacing);
}

namespace {

void write_double(std::ostream& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

} // namespace

void save_trajectory(const Trajectory& traj, std::ostream& out) {
    for (const auto& p : traj.waypoints) {
        write_double(out, p.x);
        out.put(' ');
        write_double(out, p.y);
        out.put(' ');
        write_double(out, p.z);
        out.put('\n');
    }
}

Trajectory load_trajectory(std::istream& in) {
    std::vector<Point3> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        Point3 p;
        if (!(ls >> p.x >> p.y >> p.z)) {
            throw std::runtime_error("malformed trajectory line: " + line);
        }
        pts.push_back(p);
    }
    return Trajectory::from_waypoints(std::move(pts));
}

void save_trajectory_file(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    save_trajectory(traj, out);
}

Trajectory load_trajectory_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_trajectory(in);
}

} // namespace pnav
