#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "noregret/common.hpp"
#include "noregret/control.hpp"
#include "noregret/ip.hpp"
#include "noregret/regression.hpp"

namespace noregret {

// Experiment configuration: a line-based key-value file with [dotted.section]
// headers on the way in, a resolved JSON snapshot (all defaults materialized)
// on the way out. Parsing is strict; a key nothing consumes is a config error,
// not a silently ignored typo.
class KvConfig {
  public:
    static KvConfig parse_file(const std::filesystem::path& path);
    static KvConfig parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key);
    std::optional<std::string> maybe_string(const std::string& key);
    double get_double(const std::string& key, std::optional<double> fallback = std::nullopt);
    Index get_index(const std::string& key, std::optional<Index> fallback = std::nullopt);
    std::uint64_t get_u64(const std::string& key);
    bool get_bool(const std::string& key, std::optional<bool> fallback = std::nullopt);
    VectorXd get_vector(const std::string& key);
    std::optional<VectorXd> maybe_vector(const std::string& key);

    // Throws listing every key that was never consumed.
    void finish() const;

  private:
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
    std::string origin_;
};

struct DynamicsConfig {
    std::string system = "linear";  // linear | affine | sine
    Index horizon = 10000;
    // linear: x' = M x + d
    MatrixXd transition;
    VectorXd x0;
    // affine: y' = lambda y + offset + d;  sine: y' = lambda sin(y) + d
    double lambda = 0.5;
    double offset = 1.0;
    VectorXd y0 = VectorXd::Zero(1);
    // disturbance
    std::string disturbance_kind = "example1";  // example1 | constant | csv
    double scale = 0.1;   // example1 amplitude; doubles as r in the bound
    double bound = 0.0;   // constant amplitude
    std::string input;    // csv base trace path
    VectorXd direction;   // default: first basis vector
    // bound-check query
    double ip_epsilon = 0.05;
    std::vector<Index> ip_durations = {10, 100};
    double tail_tol = 1e-8;

    DynamicsConfig();

    Index state_dimension() const;
};

struct IpcheckConfig {
    std::string input;
    IpTarget target = IpTarget::point(0.0);
    double epsilon = 0.05;
    Index duration = 10;
    Index start = 1;
};

struct PendulumExperimentConfig {
    PendulumParams params;
    ModelErrorMixture mix = ModelErrorMixture::reference();
    ControllerConfig controller;
    std::string scenario = "all";  // all | true_model | zero_model | gp_adaptive

    std::vector<Scenario> scenarios() const;
};

struct ExperimentConfig {
    std::string kind;  // regress | pendulum | dynamics | ipcheck
    std::optional<std::uint64_t> seed;
    std::vector<std::string> formats = {"csv", "json"};
    Index plot_grid = 201;  // curve-dump resolution for plotdata exports

    std::optional<RegressionExperimentConfig> regress;
    std::optional<PendulumExperimentConfig> pendulum;
    std::optional<DynamicsConfig> dynamics;
    std::optional<IpcheckConfig> ipcheck;

    void validate() const;
};

ExperimentConfig experiment_config_from_kv(KvConfig& kv);

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

}  // namespace noregret
