#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "noregret/config.hpp"
#include "noregret/io.hpp"
#include "noregret/runner.hpp"

namespace {

using noregret::ExperimentConfig;

std::vector<std::string> split_formats(const std::string& csv) {
    std::vector<std::string> formats;
    std::istringstream in(csv);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (!token.empty()) {
            formats.push_back(token);
        }
    }
    return formats;
}

void print_error(int code, const std::string& kind, const std::string& message) {
    nlohmann::json j;
    j["error"] = {{"code", code}, {"kind", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online no-regret learning toolkit: experiment runner and trace analyzer"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "Run an experiment and write its artifacts");
    std::string kind;
    run->add_option("kind", kind, "Experiment kind: regress | pendulum | dynamics | ipcheck")
        ->required();
    std::string config_path;
    run->add_option("--config", config_path, "Key-value experiment configuration file");
    std::optional<std::uint64_t> seed;
    run->add_option("--seed", seed, "Seed override (mandatory for stochastic experiments)");
    std::string out_dir = "out";
    run->add_option("--out", out_dir, "Output directory (default: out)");
    std::string formats;
    run->add_option("--format", formats, "Comma-separated outputs: csv,json,plotdata");
    std::string scenario;
    run->add_option("--scenario", scenario,
                    "Pendulum scenario: true_model | zero_model | gp_adaptive | all");
    std::string input;
    run->add_option("--input", input, "ipcheck: single-column CSV trace to analyze");
    std::optional<double> target;
    run->add_option("--target", target, "ipcheck: point target");
    std::optional<double> target_interval;
    run->add_option("--target-interval", target_interval, "ipcheck: interval target [0, r]");
    std::optional<double> eps;
    run->add_option("--eps", eps, "ipcheck: ball radius epsilon");
    std::optional<long long> duration;
    run->add_option("--duration", duration, "ipcheck: window length D");
    std::optional<long long> start;
    run->add_option("--start", start, "ipcheck: earliest window start N");

    // --- replay ---
    auto* replay = app.add_subcommand("replay", "Re-run a recorded experiment and byte-compare");
    std::string trace_file;
    replay->add_option("trace", trace_file, "Trace CSV produced by run")->required();
    std::string resolved_config;
    replay->add_option("config", resolved_config, "config.resolved.json produced by run")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentConfig config;
            if (!config_path.empty()) {
                noregret::KvConfig kv = noregret::KvConfig::parse_file(config_path);
                config = noregret::experiment_config_from_kv(kv);
                if (config.kind != kind) {
                    throw std::invalid_argument("config file is for kind '" + config.kind +
                                                "' but the command line says '" + kind + "'");
                }
            } else {
                config.kind = kind;
                if (kind == "regress") {
                    config.regress = noregret::RegressionExperimentConfig{};
                } else if (kind == "pendulum") {
                    config.pendulum = noregret::PendulumExperimentConfig{};
                } else if (kind == "dynamics") {
                    config.dynamics = noregret::DynamicsConfig{};
                } else if (kind == "ipcheck") {
                    config.ipcheck = noregret::IpcheckConfig{};
                } else {
                    throw std::invalid_argument("unknown experiment kind '" + kind + "'");
                }
            }
            if (seed) {
                config.seed = *seed;
            }
            if (!formats.empty()) {
                config.formats = split_formats(formats);
            }
            if (!scenario.empty()) {
                if (!config.pendulum) {
                    throw std::invalid_argument("--scenario applies to pendulum runs only");
                }
                config.pendulum->scenario = scenario;
            }
            if (config.ipcheck) {
                if (!input.empty()) {
                    config.ipcheck->input = input;
                }
                if (target && target_interval) {
                    throw std::invalid_argument("give either --target or --target-interval");
                }
                if (target) {
                    config.ipcheck->target = noregret::IpTarget::point(*target);
                }
                if (target_interval) {
                    config.ipcheck->target = noregret::IpTarget::interval(*target_interval);
                }
                if (eps) {
                    config.ipcheck->epsilon = *eps;
                }
                if (duration) {
                    config.ipcheck->duration = *duration;
                }
                if (start) {
                    config.ipcheck->start = *start;
                }
            } else if (!input.empty() || target || target_interval || eps || duration || start) {
                throw std::invalid_argument("--input/--target/--eps/--duration/--start apply to "
                                            "ipcheck runs only");
            }
            config.validate();
            const noregret::RunArtifacts artifacts = noregret::run_experiment(config, out_dir);
            for (const auto& file : artifacts.files) {
                std::cout << out_dir << "/" << file << "\n";
            }
            return 0;
        }
        const bool ok = noregret::replay_verify(trace_file, resolved_config, std::cerr);
        std::cout << (ok ? "replay: traces are byte-identical\n"
                         : "replay: traces differ\n");
        return ok ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        print_error(2, "config", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error(3, "runtime", e.what());
        return 3;
    }
}
