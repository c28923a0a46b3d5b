// pnav experiment CLI: plan / train / run / sweep / report.
//
// Each subcommand reads the shared config file and applies flag overrides,
// mirroring the offline-training + online-traversal pipeline of the library.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnav/config.hpp"
#include "pnav/harness.hpp"
#include "pnav/hash.hpp"
#include "pnav/navigator.hpp"
#include "pnav/planner.hpp"
#include "pnav/random.hpp"
#include "pnav/trainer.hpp"
#include "pnav/world.hpp"

namespace {

pnav::ExperimentPlan load_plan(const std::string& config_path) {
    if (config_path.empty()) return pnav::ExperimentPlan{};
    return pnav::ExperimentPlan::from_config(pnav::ConfigTree::parse_file(config_path));
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::string item;
    std::istringstream ss(csv);
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

void apply_mode(pnav::ExperimentPlan& plan, const std::string& mode) {
    if (mode.empty()) return;
    if (mode == "delay_entry") plan.navigator.mode = pnav::AvoidanceMode::delay_entry;
    else if (mode == "verbatim") plan.navigator.mode = pnav::AvoidanceMode::verbatim;
    else throw pnav::ConfigError("unknown avoidance mode: " + mode);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

int cmd_plan(const std::string& config, std::uint64_t seed, bool seed_set,
             const std::string& out) {
    pnav::ExperimentPlan plan = load_plan(config);
    if (seed_set) plan.planner.seed = seed;
    const pnav::World world = pnav::spawn(plan.world);
    const pnav::Trajectory traj = pnav::plan(world, plan.start, plan.goal, plan.planner);
    if (!out.empty()) pnav::save_trajectory_file(traj, out);
    std::cout << "planned " << traj.waypoints.size() << " waypoints, "
              << traj.edges.size() << " edges, length " << traj.total_length << " m\n";
    return 0;
}

int cmd_train(const std::string& config, const std::string& trajectory_path,
              int timestamps, std::uint64_t seed, bool seed_set, const std::string& out) {
    pnav::ExperimentPlan plan = load_plan(config);
    if (timestamps > 0) plan.trainer.n_timestamps = timestamps;
    if (seed_set) plan.trainer.seed = seed;

    const pnav::World world = pnav::spawn(plan.world);
    pnav::Trajectory traj;
    if (!trajectory_path.empty()) {
        traj = pnav::load_trajectory_file(trajectory_path);
    } else {
        traj = pnav::plan(world, plan.start, plan.goal, plan.planner);
    }
    const pnav::TrainedModel model = pnav::train(world, traj, plan.trainer);
    if (!out.empty()) model.save(out);
    std::cout << "trained lambda_x = " << model.lambda_x.lambda << " /m over "
              << model.lambda_y.size() << " edges, " << model.n_timestamps << " timestamps\n";
    return 0;
}

int cmd_run(const std::string& config, const std::string& trajectory_path,
            const std::string& model_path, int obstacles, int timestamps,
            std::uint64_t seed, bool seed_set, const std::string& mode,
            const std::string& out, const std::string& trace_path) {
    pnav::ExperimentPlan plan = load_plan(config);
    apply_mode(plan, mode);
    if (obstacles > 0) plan.world.n_moving = obstacles;
    if (timestamps > 0) plan.trainer.n_timestamps = timestamps;
    if (seed_set) {
        plan.world.seed = pnav::mix_seed(seed, 11);
        plan.planner.seed = pnav::mix_seed(seed, 12);
        plan.trainer.seed = pnav::mix_seed(seed, 13);
    }

    const pnav::World world = pnav::spawn(plan.world);
    pnav::Trajectory traj;
    if (!trajectory_path.empty()) traj = pnav::load_trajectory_file(trajectory_path);
    else traj = pnav::plan(world, plan.start, plan.goal, plan.planner);

    pnav::TrainedModel model;
    if (!model_path.empty()) model = pnav::TrainedModel::load(model_path);
    else model = pnav::train(world, traj, plan.trainer);

    const pnav::TraversalReport control = pnav::control_run(world, traj, plan.navigator.initial_speed);
    pnav::TraversalReport treat = pnav::traverse(world, traj, model, plan.navigator);
    treat.possible_collisions = control.actual_collisions;

    nlohmann::json j;
    j["schema_version"] = 1;
    j["trajectory_hash"] = pnav::hash_to_hex(traj.hash());
    j["trajectory"] = nlohmann::json::array();
    for (const auto& p : traj.waypoints) j["trajectory"].push_back({p.x, p.y, p.z});
    j["control"] = nlohmann::json::parse(control.to_json());
    j["treatment"] = nlohmann::json::parse(treat.to_json());
    const std::string text = j.dump(2) + "\n";
    if (!out.empty()) write_file(out, text);
    else std::cout << text;

    if (!trace_path.empty()) {
        std::ofstream trace(trace_path);
        if (!trace) throw std::runtime_error("cannot open " + trace_path + " for writing");
        treat.save_trace_csv(trace);
    }

    std::cout << "possible " << control.actual_collisions << ", actual "
              << treat.actual_collisions << ", total time " << treat.total_time_s << " s\n";
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& obstacles,
              const std::string& timestamps, int reps, std::uint64_t seed, bool seed_set,
              const std::string& mode, const std::string& out_dir) {
    pnav::ExperimentPlan plan = load_plan(config);
    apply_mode(plan, mode);
    if (!obstacles.empty()) plan.obstacle_counts = parse_int_list(obstacles);
    if (!timestamps.empty()) plan.observation_budgets = parse_int_list(timestamps);
    if (reps > 0) plan.repetitions = reps;
    if (seed_set) plan.base_seed = seed;

    std::filesystem::create_directories(out_dir);
    const std::string rows_path = out_dir + "/rows.csv";
    std::ofstream rows_out(rows_path);
    if (!rows_out) throw std::runtime_error("cannot open " + rows_path + " for writing");

    const pnav::SweepResult result = pnav::run_sweep(plan, &rows_out, &std::cerr);
    write_file(out_dir + "/summary.json", pnav::summary_json(result) + "\n");

    std::cout << "wrote " << (result.cells.size() - result.failed_cells) << " rows to "
              << rows_path << " (" << result.failed_cells << " failed cells)\n";
    return result.failed_cells > 0 ? 2 : 0;
}

int cmd_report(const std::string& rows_path, const std::string& kind, const std::string& out) {
    std::ifstream in(rows_path);
    if (!in) throw std::runtime_error("cannot open " + rows_path);
    const auto rows = pnav::parse_rows_csv(in);
    pnav::PlotKind plot_kind;
    if (kind == "closest_distance") plot_kind = pnav::PlotKind::closest_distance;
    else if (kind == "collisions") plot_kind = pnav::PlotKind::collisions;
    else throw pnav::ConfigError("unknown report kind: " + kind);
    const std::string csv = pnav::emit_plot_data(rows, plot_kind);
    if (!out.empty()) write_file(out, csv);
    else std::cout << csv;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poisson-rate collision prediction and speed-adjusted traversal"};
    app.require_subcommand(1);

    std::string config, out, out_dir = "out", trajectory_path, model_path, trace_path;
    std::string mode, obstacles, timestamps_list, kind = "collisions", rows_path;
    int timestamps = 0, n_obstacles = 0, reps = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });
    };

    auto* plan_cmd = app.add_subcommand("plan", "plan a trajectory against static obstacles");
    plan_cmd->add_option("--config", config, "config file");
    plan_cmd->add_option("--out", out, "trajectory output file (x y z per line)");
    add_seed(plan_cmd);

    auto* train_cmd = app.add_subcommand("train", "fit collision rates along a trajectory");
    train_cmd->add_option("--config", config, "config file");
    train_cmd->add_option("--trajectory", trajectory_path, "trajectory file from `plan`");
    train_cmd->add_option("--timestamps", timestamps, "observation timestamps");
    train_cmd->add_option("--out", out, "model JSON output file");
    add_seed(train_cmd);

    auto* run_cmd = app.add_subcommand("run", "paired control/treatment traversal");
    run_cmd->add_option("--config", config, "config file");
    run_cmd->add_option("--trajectory", trajectory_path, "trajectory file from `plan`");
    run_cmd->add_option("--model", model_path, "model JSON from `train`");
    run_cmd->add_option("--obstacles", n_obstacles, "moving obstacle count");
    run_cmd->add_option("--timestamps", timestamps, "observation timestamps");
    run_cmd->add_option("--mode", mode, "delay_entry or verbatim");
    run_cmd->add_option("--out", out, "report JSON output file");
    run_cmd->add_option("--trace", trace_path, "closest-distance trace CSV");
    add_seed(run_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "run the full experiment grid");
    sweep_cmd->add_option("--config", config, "config file");
    sweep_cmd->add_option("--obstacles", obstacles, "comma list of obstacle counts");
    sweep_cmd->add_option("--timestamps", timestamps_list, "comma list of observation budgets");
    sweep_cmd->add_option("--reps", reps, "repetitions per cell");
    sweep_cmd->add_option("--mode", mode, "delay_entry or verbatim");
    sweep_cmd->add_option("--out", out_dir, "output directory");
    add_seed(sweep_cmd);

    auto* report_cmd = app.add_subcommand("report", "aggregate a rows CSV into plot data");
    report_cmd->add_option("--rows", rows_path, "rows.csv from `sweep`")->required();
    report_cmd->add_option("--kind", kind, "closest_distance or collisions");
    report_cmd->add_option("--out", out, "plot CSV output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan_cmd->parsed()) return cmd_plan(config, seed, seed_set, out);
        if (train_cmd->parsed()) return cmd_train(config, trajectory_path, timestamps, seed, seed_set, out);
        if (run_cmd->parsed()) {
            return cmd_run(config, trajectory_path, model_path, n_obstacles, timestamps,
                           seed, seed_set, mode, out, trace_path);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(config, obstacles, timestamps_list, reps, seed, seed_set, mode, out_dir);
        }
        if (report_cmd->parsed()) return cmd_report(rows_path, kind, out);
    } catch (const pnav::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
