#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pnav/config.hpp"
#include "pnav/navigator.hpp"
#include "pnav/planner.hpp"
#include "pnav/trainer.hpp"
#include "pnav/world.hpp"

namespace pnav {

/// One experiment sweep: obstacle counts x observation budgets x seeded
/// repetitions, all driven from shared module configs.
struct ExperimentPlan {
    std::vector<int> obstacle_counts = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    std::vector<int> observation_budgets = {10, 20};
    int repetitions = 10;
    std::uint64_t base_seed = 1;
    int parallelism = 1;

    WorldConfig world;
    PlannerConfig planner;
    TrainingConfig trainer;
    NavigatorConfig navigator;
    Point3 start{0.5, 0.5, 0.5};
    Point3 goal{4.5, 4.5, 4.5};

    static ExperimentPlan from_config(const ConfigTree& cfg);
};

struct ExperimentRow {
    int n_obstacles = 0;
    int n_timestamps = 0;
    std::uint64_t seed = 0;
    std::string mode;
    int possible = 0;
    int actual = 0;
    int avoided = 0;
    double accuracy_pct = 0.0;
    double closest_mean_m = 0.0;
    double total_time_s = 0.0;
    int adjustments = 0;
    bool degenerate = false;
};

/// Row plus the paired-control figures that the pinned CSV schema omits.
struct CellResult {
    ExperimentRow row;
    double control_closest_m = 0.0;
    double control_time_s = 0.0;
    bool failed = false;
    std::string error;
};

struct SweepSummaryCell {
    int n_obstacles = 0;
    int n_timestamps = 0;
    int reps = 0;
    double mean_possible = 0.0;
    double mean_actual = 0.0;
    double mean_accuracy_pct = 0.0;
    double mean_closest_m = 0.0;
    double mean_control_closest_m = 0.0;
};

struct SweepResult {
    std::vector<CellResult> cells;            // in (cell, repetition) order
    std::vector<SweepSummaryCell> summary;    // per (n_obstacles, n_timestamps)
    int failed_cells = 0;
};

/// spawn -> plan -> train (reseeded clone) -> paired control + treatment.
/// Fully deterministic in (plan, n_obstacles, n_timestamps, seed).
CellResult run_cell(const ExperimentPlan& plan, int n_obstacles, int n_timestamps,
                    std::uint64_t seed);

/// All cells and repetitions. When rows_out is non-null, rows stream to it in
/// deterministic order as cells complete, so an interruption keeps a valid
/// prefix. PNAV_JOBS overrides plan.parallelism.
SweepResult run_sweep(const ExperimentPlan& plan, std::ostream* rows_out,
                      std::ostream* progress);

enum class PlotKind {
    closest_distance,
    collisions,
};

struct EmptyInput : std::invalid_argument {
    EmptyInput() : std::invalid_argument("no rows to aggregate") {}
};

/// Plot-ready CSV: mean and standard error per obstacle count, one series per
/// observation budget (and per control/treatment arm for the collisions kind).
std::string emit_plot_data(const std::vector<ExperimentRow>& rows, PlotKind kind);

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_row_csv(std::ostream& out, const ExperimentRow& row);
void write_rows_csv_header(std::ostream& out);
std::vector<ExperimentRow> parse_rows_csv(std::istream& in);

std::string summary_json(const SweepResult& result);

} // namespace pnav
