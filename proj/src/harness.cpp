#include "pnav/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pnav/random.hpp"

namespace pnav {

namespace {

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError("bad numeric field in CSV: " + s);
    }
    return v;
}

Point3 point_from(const ConfigTree& cfg, const std::string& key, const Point3& fallback) {
    if (!cfg.has(key)) return fallback;
    const auto v = cfg.get_doubles(key);
    if (v.size() != 3) throw ConfigError("key " + key + ": expected three coordinates");
    return {v[0], v[1], v[2]};
}

} // namespace

ExperimentPlan ExperimentPlan::from_config(const ConfigTree& cfg) {
    ExperimentPlan plan;

    auto& w = plan.world;
    w.bounds.min = point_from(cfg, "world.bounds_min", w.bounds.min);
    w.bounds.max = point_from(cfg, "world.bounds_max", w.bounds.max);
    w.n_moving = cfg.get_int("world.n_moving", w.n_moving);
    w.n_static = cfg.get_int("world.n_static", w.n_static);
    w.obstacle_radius = cfg.get_double("world.obstacle_radius", w.obstacle_radius);
    w.obstacle_speed_min = cfg.get_double("world.obstacle_speed_min", w.obstacle_speed_min);
    w.obstacle_speed_max = cfg.get_double("world.obstacle_speed_max", w.obstacle_speed_max);
    w.robot_radius = cfg.get_double("world.robot_radius", w.robot_radius);
    w.collision_radius = cfg.get_double("world.collision_radius", w.collision_radius);
    w.dt = cfg.get_double("world.dt", w.dt);
    w.waypoint_inflation = cfg.get_double("world.waypoint_inflation", w.waypoint_inflation);
    w.static_half_extent = cfg.get_double("world.static_half_extent", w.static_half_extent);
    w.seed = cfg.get_u64("world.seed", w.seed);
    const std::string motion = cfg.get_string("world.motion_mode", "random_waypoint");
    if (motion == "random_waypoint") w.motion_mode = MotionMode::random_waypoint;
    else if (motion == "straight_line") w.motion_mode = MotionMode::straight_line;
    else throw ConfigError("world.motion_mode: unknown mode " + motion);

    auto& p = plan.planner;
    const std::string algo = cfg.get_string("planner.algorithm", "rrt_star");
    if (algo == "rrt_star") p.algorithm = PlannerAlgorithm::rrt_star;
    else if (algo == "straight_line") p.algorithm = PlannerAlgorithm::straight_line;
    else throw ConfigError("planner.algorithm: unknown algorithm " + algo);
    p.max_iterations = cfg.get_int("planner.max_iterations", p.max_iterations);
    p.steer_step = cfg.get_double("planner.steer_step", p.steer_step);
    p.neighborhood_radius = cfg.get_double("planner.neighborhood_radius", p.neighborhood_radius);
    p.goal_bias = cfg.get_double("planner.goal_bias", p.goal_bias);
    p.goal_tolerance = cfg.get_double("planner.goal_tolerance", p.goal_tolerance);
    p.resample_spacing = cfg.get_double("planner.resample_spacing", p.resample_spacing);
    p.planar = cfg.get_bool("planner.planar", p.planar);
    p.seed = cfg.get_u64("planner.seed", p.seed);

    auto& t = plan.trainer;
    t.n_timestamps = cfg.get_int("trainer.n_timestamps", t.n_timestamps);
    t.observation_interval = cfg.get_double("trainer.observation_interval", t.observation_interval);
    t.seed = cfg.get_u64("trainer.seed", t.seed);

    auto& n = plan.navigator;
    n.threshold = cfg.get_double("navigator.threshold", n.threshold);
    n.initial_speed = cfg.get_double("navigator.initial_speed", n.initial_speed);
    const std::string dec = cfg.get_string("navigator.decrement", "multiplicative");
    if (dec == "multiplicative") n.decrement = SpeedDecrement::multiplicative;
    else if (dec == "subtractive") n.decrement = SpeedDecrement::subtractive;
    else throw ConfigError("navigator.decrement: unknown kind " + dec);
    n.decrement_factor = cfg.get_double("navigator.decrement_factor", n.decrement_factor);
    n.decrement_delta = cfg.get_double("navigator.decrement_delta", n.decrement_delta);
    n.min_speed = cfg.get_double("navigator.min_speed", n.min_speed);
    n.max_adjust_iterations = cfg.get_int("navigator.max_adjust_iterations", n.max_adjust_iterations);
    const std::string mode = cfg.get_string("navigator.mode", "delay_entry");
    if (mode == "delay_entry") n.mode = AvoidanceMode::delay_entry;
    else if (mode == "verbatim") n.mode = AvoidanceMode::verbatim;
    else throw ConfigError("navigator.mode: unknown mode " + mode);

    if (cfg.has("sweep.obstacle_counts")) plan.obstacle_counts = cfg.get_int_list("sweep.obstacle_counts");
    if (cfg.has("sweep.observation_budgets")) plan.observation_budgets = cfg.get_int_list("sweep.observation_budgets");
    plan.repetitions = cfg.get_int("sweep.repetitions", plan.repetitions);
    plan.base_seed = cfg.get_u64("sweep.base_seed", plan.base_seed);
    plan.parallelism = cfg.get_int("sweep.parallelism", plan.parallelism);
    plan.start = point_from(cfg, "run.start", plan.start);
    plan.goal = point_from(cfg, "run.goal", plan.goal);

    if (plan.obstacle_counts.empty() || plan.observation_budgets.empty() || plan.repetitions < 1) {
        throw ConfigError("sweep lists must be non-empty and repetitions >= 1");
    }
    return plan;
}

CellResult run_cell(const ExperimentPlan& plan, int n_obstacles, int n_timestamps,
                    std::uint64_t seed) {
    CellResult result;
    auto& row = result.row;
    row.n_obstacles = n_obstacles;
    row.n_timestamps = n_timestamps;
    row.seed = seed;

    try {
        WorldConfig wc = plan.world;
        wc.n_moving = n_obstacles;
        wc.seed = mix_seed(seed, 11);
        const World world = spawn(wc);

        PlannerConfig pc = plan.planner;
        pc.seed = mix_seed(seed, 12);
        const Trajectory traj = pnav::plan(world, plan.start, plan.goal, pc);

        TrainingConfig tc = plan.trainer;
        tc.n_timestamps = n_timestamps;
        tc.seed = mix_seed(seed, 13);
        const TrainedModel model = train(world, traj, tc);

        const TraversalReport control = control_run(world, traj, plan.navigator.initial_speed);
        const TraversalReport treat = traverse(world, traj, model, plan.navigator);

        row.mode = treat.mode;
        row.possible = control.actual_collisions;
        row.actual = treat.actual_collisions;
        row.avoided = row.possible - row.actual;
        if (row.possible > 0) {
            row.accuracy_pct = std::clamp(100.0 * row.avoided / row.possible, 0.0, 100.0);
        } else {
            row.accuracy_pct = 100.0;
            row.degenerate = true;
        }
        row.closest_mean_m = treat.closest_distance_m;
        row.total_time_s = treat.total_time_s;
        row.adjustments = treat.adjustment_count;

        result.control_closest_m = control.closest_distance_m;
        result.control_time_s = control.total_time_s;
    } catch (const PlanningFailed& e) {
        result.failed = true;
        result.error = e.what();
    } catch (const InvalidEndpoint& e) {
        result.failed = true;
        result.error = e.what();
    }
    return result;
}

namespace {

int effective_parallelism(const ExperimentPlan& plan) {
    int jobs = plan.parallelism;
    if (const char* env = std::getenv("PNAV_JOBS")) {
        try {
            jobs = std::stoi(env);
        } catch (const std::exception&) {
            throw ConfigError(std::string("PNAV_JOBS is not an integer: ") + env);
        }
    }
    return std::max(1, jobs);
}

} // namespace

SweepResult run_sweep(const ExperimentPlan& plan, std::ostream* rows_out,
                      std::ostream* progress) {
    struct Job {
        int n_obstacles;
        int n_timestamps;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    const std::uint64_t reps = static_cast<std::uint64_t>(plan.repetitions);
    std::uint64_t cell_index = 0;
    for (int count : plan.obstacle_counts) {
        for (int budget : plan.observation_budgets) {
            for (int rep = 0; rep < plan.repetitions; ++rep) {
                jobs.push_back({count, budget,
                                plan.base_seed + cell_index * reps + static_cast<std::uint64_t>(rep)});
            }
            ++cell_index;
        }
    }

    SweepResult result;
    result.cells.resize(jobs.size());
    std::vector<char> done(jobs.size(), 0);

    if (rows_out) {
        *rows_out << "# schema_version=1\n";
        write_rows_csv_header(*rows_out);
    }

    std::atomic<std::size_t> next_job{0};
    std::mutex io_mutex;
    std::size_t flushed = 0;

    auto worker = [&]() {
        for (;;) {
            const std::size_t j = next_job.fetch_add(1);
            if (j >= jobs.size()) break;
            CellResult cell = run_cell(plan, jobs[j].n_obstacles, jobs[j].n_timestamps, jobs[j].seed);

            std::lock_guard<std::mutex> lock(io_mutex);
            result.cells[j] = std::move(cell);
            done[j] = 1;
            while (flushed < jobs.size() && done[flushed]) {
                const CellResult& c = result.cells[flushed];
                if (c.failed) {
                    ++result.failed_cells;
                    if (progress) {
                        *progress << "cell " << flushed << " failed: " << c.error << '\n';
                    }
                } else if (rows_out) {
                    write_row_csv(*rows_out, c.row);
                    rows_out->flush();
                }
                ++flushed;
            }
        }
    };

    const int n_threads = effective_parallelism(plan);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads - 1; ++i) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    // Aggregate per (n_obstacles, n_timestamps), in plan order.
    std::map<std::pair<int, int>, SweepSummaryCell> agg;
    for (const auto& cell : result.cells) {
        if (cell.failed) continue;
        const auto key = std::make_pair(cell.row.n_obstacles, cell.row.n_timestamps);
        auto& s = agg[key];
        s.n_obstacles = cell.row.n_obstacles;
        s.n_timestamps = cell.row.n_timestamps;
        ++s.reps;
        s.mean_possible += cell.row.possible;
        s.mean_actual += cell.row.actual;
        s.mean_accuracy_pct += cell.row.accuracy_pct;
        s.mean_closest_m += cell.row.closest_mean_m;
        s.mean_control_closest_m += cell.control_closest_m;
    }
    for (int count : plan.obstacle_counts) {
        for (int budget : plan.observation_budgets) {
            const auto it = agg.find({count, budget});
            if (it == agg.end()) continue;
            SweepSummaryCell s = it->second;
            s.mean_possible /= s.reps;
            s.mean_actual /= s.reps;
            s.mean_accuracy_pct /= s.reps;
            s.mean_closest_m /= s.reps;
            s.mean_control_closest_m /= s.reps;
            result.summary.push_back(s);
        }
    }
    return result;
}

void write_rows_csv_header(std::ostream& out) {
    out << "n_obstacles,n_timestamps,seed,mode,possible,actual,avoided,"
           "accuracy_pct,closest_mean_m,total_time_s,adjustments,degenerate\n";
}

void write_row_csv(std::ostream& out, const ExperimentRow& row) {
    out << row.n_obstacles << ',' << row.n_timestamps << ',' << row.seed << ','
        << row.mode << ',' << row.possible << ',' << row.actual << ',' << row.avoided << ','
        << fmt(row.accuracy_pct) << ',' << fmt(row.closest_mean_m) << ','
        << fmt(row.total_time_s) << ',' << row.adjustments << ',' << (row.degenerate ? 1 : 0)
        << '\n';
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << "# schema_version=1\n";
    write_rows_csv_header(out);
    for (const auto& row : rows) write_row_csv(out, row);
}

std::vector<ExperimentRow> parse_rows_csv(std::istream& in) {
    std::vector<ExperimentRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;   // header row
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 12) throw ConfigError("malformed CSV row: " + line);
        ExperimentRow row;
        row.n_obstacles = std::stoi(fields[0]);
        row.n_timestamps = std::stoi(fields[1]);
        row.seed = std::stoull(fields[2]);
        row.mode = fields[3];
        row.possible = std::stoi(fields[4]);
        row.actual = std::stoi(fields[5]);
        row.avoided = std::stoi(fields[6]);
        row.accuracy_pct = parse_double(fields[7]);
        row.closest_mean_m = parse_double(fields[8]);
        row.total_time_s = parse_double(fields[9]);
        row.adjustments = std::stoi(fields[10]);
        row.degenerate = fields[11] == "1";
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

struct Series {
    std::vector<double> values;

    double mean() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }

    double stderr_of_mean() const {
        const std::size_t n = values.size();
        if (n < 2) return 0.0;
        const double m = mean();
        double ss = 0.0;
        for (double v : values) ss += (v - m) * (v - m);
        return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    }
};

} // namespace

std::string emit_plot_data(const std::vector<ExperimentRow>& rows, PlotKind kind) {
    if (rows.empty()) throw EmptyInput{};

    // (budget, arm, count) -> values; arm is "treatment"/"control".
    std::map<std::tuple<int, std::string, int>, Series> groups;
    for (const auto& row : rows) {
        if (kind == PlotKind::closest_distance) {
            groups[{row.n_timestamps, "treatment", row.n_obstacles}].values.push_back(row.closest_mean_m);
        } else {
            groups[{row.n_timestamps, "control", row.n_obstacles}].values.push_back(row.possible);
            groups[{row.n_timestamps, "treatment", row.n_obstacles}].values.push_back(row.actual);
        }
    }

    std::ostringstream out;
    out << "# schema_version=1\n";
    out << "n_timestamps,arm,n_obstacles,mean,stderr\n";
    for (const auto& [key, series] : groups) {
        out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
            << fmt(series.mean()) << ',' << fmt(series.stderr_of_mean()) << '\n';
    }
    return out.str();
}

std::string summary_json(const SweepResult& result) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["failed_cells"] = result.failed_cells;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& s : result.summary) {
        cells.push_back({{"n_obstacles", s.n_obstacles},
                         {"n_timestamps", s.n_timestamps},
                         {"reps", s.reps},
                         {"mean_possible", s.mean_possible},
                         {"mean_actual", s.mean_actual},
                         {"mean_accuracy_pct", s.mean_accuracy_pct},
                         {"mean_closest_m", s.mean_closest_m},
                         {"mean_control_closest_m", s.mean_control_closest_m}});
    }
    j["cells"] = cells;
    return j.dump(2);
}

} // namespace pnav
