#include "pnav/trainer.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pnav/hash.hpp"

namespace pnav {

TrainedModel train(const World& world, const Trajectory& traj, const TrainingConfig& cfg) {
    if (traj.edges.empty() || traj.total_length <= 0.0) throw DegenerateTrajectory{};
    if (cfg.n_timestamps < 1) throw std::invalid_argument("n_timestamps must be >= 1");
    if (cfg.observation_interval <= 0.0) throw std::invalid_argument("observation_interval must be > 0");

    World clone = cfg.seed != 0 ? reseed_moving(world, cfg.seed) : world;

    TrainedModel model;
    model.n_timestamps = cfg.n_timestamps;
    model.observation_interval = cfg.observation_interval;
    model.total_length = traj.total_length;
    model.trajectory_hash = traj.hash();
    model.edge_logs.resize(traj.edges.size());

    for (int k = 0; k < cfg.n_timestamps; ++k) {
        clone.step(cfg.observation_interval);
        model.trajectory_log.counts.push_back(collision_count(clone, traj.edges));
        const auto per_edge = per_edge_collision_counts(clone, traj.edges);
        for (std::size_t i = 0; i < per_edge.size(); ++i) {
            model.edge_logs[i].counts.push_back(per_edge[i]);
        }
    }

    // Closed forms: lambda_X = countDist/(n*D), lambda_Y_i = countTime_i/n.
    long long count_dist = 0;
    for (int c : model.trajectory_log.counts) count_dist += c;
    const double n = static_cast<double>(cfg.n_timestamps);
    model.lambda_x = {static_cast<double>(count_dist) / (n * traj.total_length),
                      RateUnit::per_meter};
    model.lambda_y.reserve(traj.edges.size());
    for (const auto& log : model.edge_logs) {
        model.lambda_y.push_back(fit_mle(log, RateUnit::per_interval));
    }
    return model;
}

std::string TrainedModel::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["lambda_x_per_m"] = lambda_x.lambda;
    nlohmann::json rates = nlohmann::json::array();
    for (const auto& m : lambda_y) rates.push_back(m.lambda);
    j["lambda_y_per_interval"] = rates;
    j["n_timestamps"] = n_timestamps;
    j["observation_interval_s"] = observation_interval;
    j["total_length_m"] = total_length;
    j["trajectory_hash"] = hash_to_hex(trajectory_hash);
    j["logs"]["trajectory"] = trajectory_log.counts;
    nlohmann::json edge_json = nlohmann::json::array();
    for (const auto& log : edge_logs) edge_json.push_back(log.counts);
    j["logs"]["edges"] = edge_json;
    return j.dump(2);
}

TrainedModel TrainedModel::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    TrainedModel m;
    m.lambda_x = {j.at("lambda_x_per_m").get<double>(), RateUnit::per_meter};
    for (double v : j.at("lambda_y_per_interval")) {
        m.lambda_y.push_back({v, RateUnit::per_interval});
    }
    m.n_timestamps = j.at("n_timestamps").get<int>();
    m.observation_interval = j.at("observation_interval_s").get<double>();
    m.total_length = j.at("total_length_m").get<double>();
    m.trajectory_hash = std::stoull(j.at("trajectory_hash").get<std::string>(), nullptr, 16);
    m.trajectory_log.counts = j.at("logs").at("trajectory").get<std::vector<int>>();
    for (const auto& log : j.at("logs").at("edges")) {
        ObservationLog l;
        l.counts = log.get<std::vector<int>>();
        m.edge_logs.push_back(std::move(l));
    }
    return m;
}

void TrainedModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << to_json() << '\n';
}

TrainedModel TrainedModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

} // namespace pnav
