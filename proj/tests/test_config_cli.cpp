#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "noregret/config.hpp"
#include "noregret/io.hpp"
#include "noregret/runner.hpp"

using namespace noregret;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("noregret-test-" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig parse_text(const std::string& text) {
    KvConfig kv = KvConfig::parse_string(text);
    return experiment_config_from_kv(kv);
}

ExperimentConfig default_regress_config(std::uint64_t seed) {
    ExperimentConfig config;
    config.kind = "regress";
    config.seed = seed;
    config.regress = RegressionExperimentConfig{};
    return config;
}

}  // namespace

TEST_CASE("key-value files parse sections, comments and values") {
    KvConfig kv = KvConfig::parse_string(
        "# experiment\n"
        "kind = regress\n"
        "seed = 42\n"
        "[regress]\n"
        "horizon = 250\n"
        "eta0 = 0.5\n"
        "[regress.feasible_set]\n"
        "type = box\n"
        "lower = -5\n"
        "upper = 5\n");
    const ExperimentConfig config = experiment_config_from_kv(kv);
    CHECK(config.kind == "regress");
    CHECK(config.seed == 42);
    REQUIRE(config.regress.has_value());
    CHECK(config.regress->horizon == 250);
    CHECK(config.regress->eta0 == 0.5);
    CHECK(config.regress->feasible_set.is_box());
    CHECK(config.regress->feasible_set.as_box().lower == VectorXd::Constant(4, -5.0));
}

TEST_CASE("unknown keys are fatal") {
    CHECK_THROWS_WITH_AS(parse_text("kind = regress\nseed = 1\n[regress]\nhorizont = 10\n"),
                         doctest::Contains("regress.horizont"), std::invalid_argument);
}

TEST_CASE("duplicate keys are fatal") {
    CHECK_THROWS_AS(KvConfig::parse_string("kind = regress\nkind = pendulum\n"),
                    std::invalid_argument);
}

TEST_CASE("malformed lines and values are fatal") {
    CHECK_THROWS_AS(KvConfig::parse_string("kind regress\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("kind = regress\nseed = not-a-number\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_text("kind = mystery\n"), std::invalid_argument);
}

TEST_CASE("stochastic experiments demand a seed") {
    CHECK_THROWS_WITH_AS(parse_text("kind = regress\n"), doctest::Contains("seed"),
                         std::invalid_argument);
    // the pendulum has no random draws; it runs without one
    CHECK_NOTHROW(parse_text("kind = pendulum\n"));
}

TEST_CASE("defaults materialize for every kind") {
    const ExperimentConfig pendulum = parse_text("kind = pendulum\n");
    REQUIRE(pendulum.pendulum.has_value());
    CHECK(pendulum.pendulum->scenario == "all");
    CHECK(pendulum.pendulum->params.time_step == 0.01);
    CHECK(pendulum.pendulum->controller.kp == 4.0);
    CHECK(pendulum.pendulum->mix.weights.size() == 4);

    const ExperimentConfig dynamics = parse_text("kind = dynamics\n");
    REQUIRE(dynamics.dynamics.has_value());
    CHECK(dynamics.dynamics->system == "linear");
    CHECK(dynamics.dynamics->transition.rows() == 2);
    CHECK(dynamics.dynamics->disturbance_kind == "example1");

    const ExperimentConfig ipcheck =
        parse_text("kind = ipcheck\n[ipcheck]\ninput = trace.csv\n");
    REQUIRE(ipcheck.ipcheck.has_value());
    CHECK(ipcheck.ipcheck->epsilon == 0.05);
    CHECK(ipcheck.ipcheck->duration == 10);
}

TEST_CASE("resolved snapshots re-parse to an equal configuration") {
    std::vector<std::string> texts = {
        "kind = regress\nseed = 9\n[regress]\nhorizon = 30\n",
        "kind = pendulum\n[pendulum]\nscenario = gp_adaptive\nkd = 1.5\n",
        "kind = dynamics\n[dynamics]\nsystem = affine\nlambda = 0.4\noffset = 2\n"
        "[dynamics.disturbance]\nkind = constant\nbound = 0.02\n",
        "kind = ipcheck\n[ipcheck]\ninput = t.csv\ntarget_interval = 0.2\nduration = 25\n",
    };
    for (const auto& text : texts) {
        const ExperimentConfig config = parse_text(text);
        const nlohmann::json snapshot = to_json(config);
        const ExperimentConfig reparsed = experiment_config_from_json(snapshot);
        CHECK(to_json(reparsed) == snapshot);
    }
}

TEST_CASE("seventeen significant digits round-trip doubles") {
    for (double v : {0.1, 1.0 / 3.0, 2.0 / 0.98, 1e-300, 12345.6789, 0.0}) {
        CHECK(std::stod(format_g17(v)) == v);
        CHECK(std::stod(format_g17(-v)) == -v);
    }
}

TEST_CASE("single-column CSV loading skips one header line") {
    TempDir dir("csv");
    write_text_file(dir.path / "a.csv", "loss\n0.5\n0.25\n0.125\n");
    const SequenceTrace trace = load_column_csv(dir.path / "a.csv");
    REQUIRE(trace.size() == 3);
    CHECK(trace[2] == 0.125);

    write_text_file(dir.path / "b.csv", "1.5,99\n2.5,98\n");
    const SequenceTrace first_column = load_column_csv(dir.path / "b.csv");
    CHECK(first_column[1] == 2.5);

    write_text_file(dir.path / "bad.csv", "0.5\noops\n");
    CHECK_THROWS_AS(load_column_csv(dir.path / "bad.csv"), std::runtime_error);
}

TEST_CASE("plotdata files carry a hash-prefixed header") {
    TempDir dir("plotdata");
    SequenceTrace a(2);
    a << 1.0, 2.0;
    SequenceTrace b(2);
    b << 0.5, 0.25;
    write_plotdata(dir.path / "p.dat", {"t", "value"}, {a, b});
    CHECK(read_text_file(dir.path / "p.dat") == "# t value\n1 0.5\n2 0.25\n");
}

TEST_CASE("identical configs produce byte-identical artifacts") {
    TempDir dir_a("run-a");
    TempDir dir_b("run-b");
    const ExperimentConfig config = default_regress_config(42);
    run_experiment(config, dir_a.path);
    run_experiment(config, dir_b.path);
    for (const char* name : {"trace.csv", "ledger.csv", "summary.json",
                             "config.resolved.json"}) {
        CHECK(read_text_file(dir_a.path / name) == read_text_file(dir_b.path / name));
    }
}

TEST_CASE("replay verification accepts fresh runs and rejects tampering") {
    TempDir dir("replay");
    const ExperimentConfig config = default_regress_config(7);
    run_experiment(config, dir.path);
    std::ostringstream diag;
    CHECK(replay_verify(dir.path / "trace.csv", dir.path / "config.resolved.json", diag));

    // perturb one cell
    std::string trace = read_text_file(dir.path / "trace.csv");
    const auto pos = trace.rfind("0.");
    REQUIRE(pos != std::string::npos);
    trace[pos + 2] = trace[pos + 2] == '9' ? '8' : '9';
    write_text_file(dir.path / "trace.csv", trace);
    std::ostringstream mismatch;
    CHECK_FALSE(
        replay_verify(dir.path / "trace.csv", dir.path / "config.resolved.json", mismatch));
    CHECK(mismatch.str().find("mismatch at line") != std::string::npos);

    // restore the trace, change the recorded seed
    run_experiment(config, dir.path);
    nlohmann::json snapshot =
        nlohmann::json::parse(read_text_file(dir.path / "config.resolved.json"));
    snapshot["seed"] = 8;
    write_text_file(dir.path / "config.resolved.json", snapshot.dump(2) + "\n");
    std::ostringstream reseeded;
    CHECK_FALSE(
        replay_verify(dir.path / "trace.csv", dir.path / "config.resolved.json", reseeded));

    CHECK_THROWS_AS(replay_verify(dir.path / "missing.csv",
                                  dir.path / "config.resolved.json", diag),
                    std::invalid_argument);
}

TEST_CASE("pendulum runs export one trace per scenario plus a comparison") {
    TempDir dir("pendulum");
    ExperimentConfig config;
    config.kind = "pendulum";
    config.pendulum = PendulumExperimentConfig{};
    config.pendulum->params.horizon = 400;  // short run: artifact shape only
    config.formats = {"csv", "json", "plotdata"};
    run_experiment(config, dir.path);
    for (const char* name :
         {"trace_true_model.csv", "trace_zero_model.csv", "trace_gp_adaptive.csv",
          "summary.json", "fig2.dat", "config.resolved.json"}) {
        CHECK(fs::exists(dir.path / name));
    }
    const auto summary = nlohmann::json::parse(read_text_file(dir.path / "summary.json"));
    CHECK(summary.at("ordering").contains("gp_at_least_10x_below_zero"));
    const std::string header =
        read_text_file(dir.path / "trace_gp_adaptive.csv").substr(0, 60);
    CHECK(header.find("t,x1,x2,xref1,xref2,e1,e2,enorm,u,loss,theta1") == 0);
}

TEST_CASE("dynamics runs export the bound report") {
    TempDir dir("dynamics");
    ExperimentConfig config;
    config.kind = "dynamics";
    config.dynamics = DynamicsConfig{};
    config.dynamics->horizon = 2000;
    run_experiment(config, dir.path);
    const auto summary = nlohmann::json::parse(read_text_file(dir.path / "summary.json"));
    CHECK(summary.at("sigma").get<double>() == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(summary.at("r").get<double>() == doctest::Approx(0.1));
    CHECK(summary.at("bound").get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(summary.at("ip_report").at("consistent").get<bool>());
    CHECK(summary.at("tail_violation_fraction").get<double>() < 0.05);
}

TEST_CASE("ipcheck wraps the witness search") {
    TempDir dir("ipcheck");
    SequenceTrace trace(200);
    for (Index t = 1; t <= 200; ++t) {
        trace[t - 1] = 1.0 / static_cast<double>(t);
    }
    save_column_csv(dir.path / "trace.csv", trace, "value");
    ExperimentConfig config;
    config.kind = "ipcheck";
    config.ipcheck = IpcheckConfig{};
    config.ipcheck->input = (dir.path / "trace.csv").string();
    config.ipcheck->epsilon = 0.05;
    config.ipcheck->duration = 10;
    run_experiment(config, dir.path);
    const auto summary = nlohmann::json::parse(read_text_file(dir.path / "summary.json"));
    // 1/t <= 0.05 from t = 20 on, so the earliest window (n, n+10] is n = 19
    CHECK(summary.at("report").at("witness_index").get<Index>() == 19);
    CHECK_FALSE(summary.at("report").at("infeasible").get<bool>());
}

#ifdef NOREGRET_CONFIG_DIR
TEST_CASE("the shipped reference configs parse and run") {
    const fs::path config_dir = NOREGRET_CONFIG_DIR;
    for (const auto& entry : fs::directory_iterator(config_dir)) {
        KvConfig kv = KvConfig::parse_file(entry.path());
        const ExperimentConfig config = experiment_config_from_kv(kv);
        const nlohmann::json snapshot = to_json(config);
        CHECK(to_json(experiment_config_from_json(snapshot)) == snapshot);
    }

    // the contraction reference config reproduces its documented bound
    TempDir dir("configs");
    KvConfig kv = KvConfig::parse_file(config_dir / "dynamics_contraction.conf");
    ExperimentConfig config = experiment_config_from_kv(kv);
    config.dynamics->horizon = 2000;  // shortened: artifact shape only
    run_experiment(config, dir.path);
    const auto summary = nlohmann::json::parse(read_text_file(dir.path / "summary.json"));
    CHECK(summary.at("bound").get<double>() == doctest::Approx(0.2));
    CHECK(summary.at("lambda").get<double>() == 0.5);
}
#endif

#ifdef NOREGRET_CLI_PATH
TEST_CASE("the command-line binary maps errors to exit codes") {
    TempDir dir("cli");
    const std::string cli = NOREGRET_CLI_PATH;

    // a valid ipcheck run exits 0
    SequenceTrace trace = SequenceTrace::Zero(50);
    save_column_csv(dir.path / "trace.csv", trace, "value");
    const std::string run_cmd = cli + " run ipcheck --input " +
                                (dir.path / "trace.csv").string() + " --target 0 --eps 0.05" +
                                " --duration 10 --out " + (dir.path / "out").string() +
                                " > /dev/null 2>&1";
    CHECK(std::system(run_cmd.c_str()) == 0);
    CHECK(fs::exists(dir.path / "out" / "summary.json"));

    // an invalid config exits 2
    write_text_file(dir.path / "bad.conf", "kind = regress\nseed = 1\n[regress]\ntypo = 1\n");
    const std::string bad_cmd = cli + " run regress --config " +
                                (dir.path / "bad.conf").string() + " --out " +
                                (dir.path / "out2").string() + " > /dev/null 2>&1";
    const int status = std::system(bad_cmd.c_str());
    CHECK(WEXITSTATUS(status) == 2);
}
#endif
