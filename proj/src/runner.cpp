#include "noregret/runner.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "noregret/dynamics.hpp"
#include "noregret/io.hpp"
#include "noregret/ocp.hpp"

namespace noregret {

namespace fs = std::filesystem;
using nlohmann::json;

nlohmann::json ip_report_to_json(const IpReport& report) {
    json j;
    j["horizon"] = report.horizon;
    if (report.target.kind == IpTarget::Kind::Point) {
        j["target"] = {{"point", report.target.value}};
    } else {
        j["target"] = {{"interval_upper", report.target.value}};
    }
    j["consistent"] = report.consistent;
    json entries = json::array();
    for (const auto& entry : report.entries) {
        json e;
        e["epsilon"] = entry.epsilon;
        e["duration"] = entry.duration;
        e["start"] = entry.start;
        e["witness_index"] = entry.witness ? json(*entry.witness) : json(nullptr);
        e["infeasible"] = entry.infeasible;
        entries.push_back(e);
    }
    j["queries"] = entries;
    return j;
}

namespace {

bool wants(const ExperimentConfig& config, const std::string& format) {
    for (const auto& f : config.formats) {
        if (f == format) {
            return true;
        }
    }
    return false;
}

json vector_to_json(const VectorXd& v) {
    json array = json::array();
    for (Index i = 0; i < v.size(); ++i) {
        array.push_back(v[i]);
    }
    return array;
}

double mean_of(const SequenceTrace& trace, Index first, Index last) {
    // inclusive 1-based stage range
    KahanSum sum;
    for (Index t = first; t <= last; ++t) {
        sum.add(trace[t - 1]);
    }
    return sum.value() / static_cast<double>(last - first + 1);
}

void emit(const fs::path& out_dir, RunArtifacts& artifacts, const std::string& name,
          const std::string& contents) {
    write_text_file(out_dir / name, contents);
    artifacts.files.push_back(name);
}

// ----- regress ---------------------------------------------------------

std::string regression_trace_csv(const RegressionRun& run) {
    std::ostringstream out;
    const Index d = run.steps.front().input.size();
    const Index m = run.steps.front().theta.size();
    out << "stage";
    for (Index j = 1; j <= d; ++j) {
        out << ",x" << j;
    }
    out << ",y,loss";
    for (Index j = 1; j <= m; ++j) {
        out << ",theta" << j;
    }
    out << "\n";
    for (size_t i = 0; i < run.steps.size(); ++i) {
        const auto& step = run.steps[i];
        out << i + 1;
        for (Index j = 0; j < d; ++j) {
            out << ',' << format_g17(step.input[j]);
        }
        out << ',' << format_g17(step.target) << ',' << format_g17(step.loss);
        for (Index j = 0; j < m; ++j) {
            out << ',' << format_g17(step.theta[j]);
        }
        out << "\n";
    }
    return out.str();
}

RunArtifacts run_regress(const ExperimentConfig& config, const fs::path& out_dir) {
    RegressionExperimentConfig experiment = *config.regress;
    experiment.seed = *config.seed;
    const RegressionRun run = run_online_regression(experiment);
    RunArtifacts artifacts;

    if (wants(config, "csv")) {
        emit(out_dir, artifacts, "trace.csv", regression_trace_csv(run));
        std::ostringstream ledger;
        write_ledger_csv(run.ledger, ledger);
        emit(out_dir, artifacts, "ledger.csv", ledger.str());
    }
    if (wants(config, "json")) {
        const SequenceTrace losses = run.loss_trace();
        json summary;
        summary["kind"] = "regress";
        summary["seed"] = *config.seed;
        summary["horizon"] = experiment.horizon;
        summary["theta_star"] = vector_to_json(run.theta_star);
        summary["theta_init"] = vector_to_json(run.theta_init);
        summary["theta_final"] = vector_to_json(run.theta_final);
        const Index fifth = std::max<Index>(1, experiment.horizon / 5);
        summary["mean_loss_first_fifth"] = mean_of(losses, 1, fifth);
        summary["mean_loss_last_fifth"] =
            mean_of(losses, experiment.horizon - fifth + 1, experiment.horizon);
        summary["total_loss"] = [&] {
            KahanSum s;
            for (Index t = 0; t < losses.size(); ++t) {
                s.add(losses[t]);
            }
            return s.value();
        }();
        summary["ip_profile"] =
            ip_report_to_json(ip_profile(losses, IpTarget::point(0.0), {{0.05, 10}}));
        emit(out_dir, artifacts, "summary.json", summary.dump(2) + "\n");
    }
    if (wants(config, "plotdata") && experiment.hypothesis_map.input_dimension() == 1) {
        const Index n = config.plot_grid;
        SequenceTrace xs(n);
        SequenceTrace truth(n);
        SequenceTrace fitted(n);
        const double lo = experiment.input_lower[0];
        const double hi = experiment.input_upper[0];
        const RbfPredictor final_predictor{experiment.hypothesis_map, run.theta_final};
        const RbfPredictor truth_predictor{experiment.target_map, run.theta_star};
        for (Index i = 0; i < n; ++i) {
            const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            xs[i] = x;
            truth[i] = predict(truth_predictor, x);
            fitted[i] = predict(final_predictor, x);
        }
        std::ostringstream dat;
        dat << "# x f fhat\n";
        for (Index i = 0; i < n; ++i) {
            dat << format_g17(xs[i]) << ' ' << format_g17(truth[i]) << ' '
                << format_g17(fitted[i]) << "\n";
        }
        emit(out_dir, artifacts, "curves.dat", dat.str());
    }
    return artifacts;
}

// ----- pendulum --------------------------------------------------------

std::string pendulum_trace_csv(const ControlTraceBundle& bundle) {
    std::ostringstream out;
    const Index m = bundle.steps.front().theta.size();
    out << "t,x1,x2,xref1,xref2,e1,e2,enorm,u,loss";
    for (Index j = 1; j <= m; ++j) {
        out << ",theta" << j;
    }
    out << "\n";
    for (size_t i = 0; i < bundle.steps.size(); ++i) {
        const auto& s = bundle.steps[i];
        out << i + 1 << ',' << format_g17(s.x[0]) << ',' << format_g17(s.x[1]) << ','
            << format_g17(s.x_ref[0]) << ',' << format_g17(s.x_ref[1]) << ','
            << format_g17(s.error[0]) << ',' << format_g17(s.error[1]) << ','
            << format_g17(s.error.norm()) << ',' << format_g17(s.u) << ','
            << format_g17(s.loss);
        for (Index j = 0; j < m; ++j) {
            out << ',' << format_g17(s.theta[j]);
        }
        out << "\n";
    }
    return out.str();
}

RunArtifacts run_pendulum(const ExperimentConfig& config, const fs::path& out_dir) {
    const auto& experiment = *config.pendulum;
    RunArtifacts artifacts;
    json scenario_summaries;
    std::vector<ControlTraceBundle> bundles;
    for (Scenario scenario : experiment.scenarios()) {
        ControllerConfig controller = experiment.controller;
        controller.scenario = scenario;
        bundles.push_back(run_pendulum_experiment(experiment.params, experiment.mix, controller));
        const ControlTraceBundle& bundle = bundles.back();
        if (wants(config, "csv")) {
            emit(out_dir, artifacts, "trace_" + scenario_name(scenario) + ".csv",
                 pendulum_trace_csv(bundle));
        }
        const SequenceTrace errors = bundle.error_norm_trace();
        const SequenceTrace distances = bundle.target_distance_trace();
        const Index T = errors.size();
        const Index quarter = std::max<Index>(1, T / 4);
        const Index quarter_start = T - quarter + 1;
        json s;
        s["last_quarter_mean_error"] = mean_of(errors, quarter_start, T);
        s["last_quarter_max_target_distance"] =
            distances.segment(quarter_start - 1, quarter).maxCoeff();
        s["final_theta"] = vector_to_json(bundle.steps.back().theta);
        if (scenario == Scenario::GpAdaptive) {
            s["ip_profile"] = ip_report_to_json(
                ip_profile(errors, IpTarget::point(0.0), {{0.05, 10}, {0.05, 100}}));
        }
        scenario_summaries[scenario_name(scenario)] = s;
    }

    if (wants(config, "json")) {
        json summary;
        summary["kind"] = "pendulum";
        summary["scenario"] = experiment.scenario;
        summary["scenarios"] = scenario_summaries;
        if (experiment.scenario == "all") {
            const double e_true =
                scenario_summaries["true_model"]["last_quarter_mean_error"].get<double>();
            const double e_zero =
                scenario_summaries["zero_model"]["last_quarter_mean_error"].get<double>();
            const double e_gp =
                scenario_summaries["gp_adaptive"]["last_quarter_mean_error"].get<double>();
            json ordering;
            ordering["true_le_gp"] = e_true <= e_gp;
            ordering["gp_lt_zero"] = e_gp < e_zero;
            ordering["ratio_zero_over_gp"] =
                e_gp > 0.0 ? e_zero / e_gp : std::numeric_limits<double>::infinity();
            ordering["gp_at_least_10x_below_zero"] = e_zero >= 10.0 * e_gp;
            summary["ordering"] = ordering;
        }
        emit(out_dir, artifacts, "summary.json", summary.dump(2) + "\n");
    }
    if (wants(config, "plotdata")) {
        std::vector<std::string> columns{"t"};
        std::vector<SequenceTrace> data;
        const Index T = bundles.front().steps.empty()
                            ? 0
                            : static_cast<Index>(bundles.front().steps.size());
        SequenceTrace ts(T);
        for (Index t = 0; t < T; ++t) {
            ts[t] = static_cast<double>(t + 1);
        }
        data.push_back(ts);
        for (const auto& bundle : bundles) {
            const std::string name = scenario_name(bundle.scenario);
            columns.push_back("target_dist_" + name);
            data.push_back(bundle.target_distance_trace());
            columns.push_back("log10_enorm_" + name);
            SequenceTrace log_errors = bundle.error_norm_trace();
            for (Index t = 0; t < log_errors.size(); ++t) {
                log_errors[t] = std::log10(std::max(log_errors[t], 1e-16));
            }
            data.push_back(log_errors);
        }
        write_plotdata(out_dir / "fig2.dat", columns, data);
        artifacts.files.push_back("fig2.dat");
    }
    return artifacts;
}

// ----- dynamics --------------------------------------------------------

DisturbanceSignal build_disturbance(const DynamicsConfig& dyn) {
    if (dyn.disturbance_kind == "example1") {
        return DisturbanceSignal::ip_vanishing(dyn.scale * example1_sequence(dyn.horizon),
                                               dyn.direction);
    }
    if (dyn.disturbance_kind == "constant") {
        return DisturbanceSignal::constant(dyn.bound, dyn.direction);
    }
    return DisturbanceSignal::ip_vanishing(load_column_csv(dyn.input), dyn.direction);
}

RunArtifacts run_dynamics(const ExperimentConfig& config, const fs::path& out_dir) {
    const DynamicsConfig& dyn = *config.dynamics;
    const DisturbanceSignal disturbance = build_disturbance(dyn);

    double lambda = 0.0;
    double sigma = 0.0;
    SimulationResult sim;
    if (dyn.system == "linear") {
        const LinearRecurrence recurrence = LinearRecurrence::make(dyn.transition);
        lambda = spectral_radius(dyn.transition);
        sigma = sigma_sum(dyn.transition, dyn.tail_tol).value;
        sim = simulate_linear(recurrence, dyn.x0, disturbance, dyn.horizon);
    } else {
        lambda = dyn.lambda;
        sigma = 1.0 / (1.0 - lambda);
        ContractionSpec spec;
        if (dyn.system == "affine") {
            const double lam = dyn.lambda;
            const double off = dyn.offset;
            spec.map = [lam, off](const VectorXd& y) {
                return VectorXd::Constant(1, lam * y[0] + off);
            };
            spec.fixed_point = VectorXd::Constant(1, off / (1.0 - lam));
        } else {
            const double lam = dyn.lambda;
            spec.map = [lam](const VectorXd& y) {
                return VectorXd::Constant(1, lam * std::sin(y[0]));
            };
            spec.fixed_point = VectorXd::Zero(1);
        }
        spec.lipschitz = dyn.lambda;
        sim = simulate_contraction(spec, dyn.y0, disturbance, dyn.horizon);
    }

    const double r = disturbance.bound();
    const double bound = sigma * r;
    const Index T = sim.norm_trace.size();
    Index violations = 0;
    for (Index t = T / 2; t < T; ++t) {
        if (sim.norm_trace[t] > bound + dyn.ip_epsilon) {
            ++violations;
        }
    }
    const double violation_fraction =
        static_cast<double>(violations) / static_cast<double>(T - T / 2);

    std::vector<std::pair<double, Index>> queries;
    for (Index duration : dyn.ip_durations) {
        queries.emplace_back(dyn.ip_epsilon, duration);
    }
    const IpReport report = ip_profile(sim.norm_trace, IpTarget::interval(bound), queries);

    RunArtifacts artifacts;
    if (wants(config, "csv")) {
        std::ostringstream out;
        const Index dim = sim.trajectory.cols();
        out << "t";
        for (Index j = 1; j <= dim; ++j) {
            out << ",x" << j;
        }
        out << ",norm,dnorm\n";
        for (Index t = 1; t <= T; ++t) {
            out << t;
            for (Index j = 0; j < dim; ++j) {
                out << ',' << format_g17(sim.trajectory(t, j));
            }
            out << ',' << format_g17(sim.norm_trace[t - 1]) << ','
                << format_g17(sim.disturbance_norms[t - 1]) << "\n";
        }
        emit(out_dir, artifacts, "trajectory.csv", out.str());
    }
    if (wants(config, "json")) {
        json summary;
        summary["kind"] = "dynamics";
        summary["system"] = dyn.system;
        summary["sigma"] = sigma;
        summary["r"] = r;
        summary["lambda"] = lambda;
        summary["bound"] = bound;
        summary["tail_violation_fraction"] = violation_fraction;
        summary["ip_report"] = ip_report_to_json(report);
        emit(out_dir, artifacts, "summary.json", summary.dump(2) + "\n");
    }
    if (wants(config, "plotdata")) {
        SequenceTrace ts(T);
        for (Index t = 0; t < T; ++t) {
            ts[t] = static_cast<double>(t + 1);
        }
        write_plotdata(out_dir / "norms.dat", {"t", "norm", "dnorm"},
                       {ts, sim.norm_trace, sim.disturbance_norms});
        artifacts.files.push_back("norms.dat");
    }
    return artifacts;
}

// ----- ipcheck ---------------------------------------------------------

RunArtifacts run_ipcheck(const ExperimentConfig& config, const fs::path& out_dir) {
    const IpcheckConfig& check = *config.ipcheck;
    const SequenceTrace trace = load_column_csv(check.input);

    json witness_report;
    witness_report["epsilon"] = check.epsilon;
    witness_report["duration"] = check.duration;
    witness_report["start"] = check.start;
    if (check.start + check.duration > trace.size()) {
        witness_report["witness_index"] = json(nullptr);
        witness_report["infeasible"] = true;
    } else {
        const auto witness =
            ip_witness(trace, IpQuery{check.epsilon, check.duration, check.start, check.target});
        witness_report["witness_index"] = witness ? json(*witness) : json(nullptr);
        witness_report["infeasible"] = false;
    }

    RunArtifacts artifacts;
    if (wants(config, "json")) {
        json summary;
        summary["kind"] = "ipcheck";
        summary["input"] = check.input;
        summary["report"] = witness_report;
        summary["ip_profile"] = ip_report_to_json(
            ip_profile(trace, check.target, {{check.epsilon, check.duration}}));
        emit(out_dir, artifacts, "summary.json", summary.dump(2) + "\n");
    }
    return artifacts;
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& config, const fs::path& out_dir) {
    config.validate();
    fs::create_directories(out_dir);

    RunArtifacts artifacts;
    if (config.kind == "regress") {
        artifacts = run_regress(config, out_dir);
    } else if (config.kind == "pendulum") {
        artifacts = run_pendulum(config, out_dir);
    } else if (config.kind == "dynamics") {
        artifacts = run_dynamics(config, out_dir);
    } else {
        artifacts = run_ipcheck(config, out_dir);
    }

    write_text_file(out_dir / "config.resolved.json", to_json(config).dump(2) + "\n");
    artifacts.files.push_back("config.resolved.json");
    return artifacts;
}

bool replay_verify(const fs::path& trace_file, const fs::path& resolved_config,
                   std::ostream& diagnostics) {
    if (!fs::exists(trace_file)) {
        throw std::invalid_argument("replay_verify: missing trace file " + trace_file.string());
    }
    if (!fs::exists(resolved_config)) {
        throw std::invalid_argument("replay_verify: missing config file " +
                                    resolved_config.string());
    }
    json parsed;
    try {
        parsed = json::parse(read_text_file(resolved_config));
    } catch (const json::exception& e) {
        throw std::invalid_argument("replay_verify: corrupt config JSON: " +
                                    std::string(e.what()));
    }
    const ExperimentConfig config = experiment_config_from_json(parsed);

    const fs::path replay_dir =
        fs::temp_directory_path() /
        ("noregret-replay-" + std::to_string(
                                  std::hash<std::string>{}(fs::absolute(trace_file).string())));
    fs::remove_all(replay_dir);
    bool match = false;
    try {
        run_experiment(config, replay_dir);
        const fs::path regenerated = replay_dir / trace_file.filename();
        if (!fs::exists(regenerated)) {
            throw std::invalid_argument("replay_verify: the experiment does not produce " +
                                        trace_file.filename().string());
        }
        const std::string expected = read_text_file(trace_file);
        const std::string actual = read_text_file(regenerated);
        match = expected == actual;
        if (!match) {
            std::istringstream a(expected);
            std::istringstream b(actual);
            std::string line_a;
            std::string line_b;
            Index line_no = 0;
            while (true) {
                const bool more_a = static_cast<bool>(std::getline(a, line_a));
                const bool more_b = static_cast<bool>(std::getline(b, line_b));
                ++line_no;
                if (!more_a && !more_b) {
                    break;
                }
                if (line_a != line_b || more_a != more_b) {
                    diagnostics << "replay mismatch at line " << line_no << ": recorded '"
                                << (more_a ? line_a : "<eof>") << "' vs regenerated '"
                                << (more_b ? line_b : "<eof>") << "'\n";
                    break;
                }
                line_a.clear();
                line_b.clear();
            }
        }
    } catch (...) {
        fs::remove_all(replay_dir);
        throw;
    }
    fs::remove_all(replay_dir);
    return match;
}

}  // namespace noregret
