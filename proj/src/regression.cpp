#include "noregret/regression.hpp"

#include <cmath>
#include <sstream>

#include "noregret/rng.hpp"

namespace noregret {

RbfFeatureMap default_regression_map() {
    RbfFeatureMap map;
    map.centers = MatrixXd(4, 1);
    map.centers << -1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0;
    map.scales = VectorXd(4);
    map.scales << -1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0;
    return map;
}

void RegressionExperimentConfig::validate() const {
    hypothesis_map.validate();
    target_map.validate();
    require(horizon >= 1, "RegressionExperimentConfig: horizon must be >= 1");
    require(eta0 >= 0.0 && std::isfinite(eta0), "RegressionExperimentConfig: bad eta0");
    require(input_lower.size() == input_upper.size(),
            "RegressionExperimentConfig: input bound dimensions differ");
    require(input_lower.size() == hypothesis_map.input_dimension() &&
                input_lower.size() == target_map.input_dimension(),
            "RegressionExperimentConfig: input bounds do not match feature maps");
    require_finite(input_lower, "input_lower");
    require_finite(input_upper, "input_upper");
    require((input_lower.array() <= input_upper.array()).all(),
            "RegressionExperimentConfig: input_lower > input_upper");
    require(feasible_set.dimension() == hypothesis_map.count(),
            "RegressionExperimentConfig: feasible set dimension != hypothesis feature count");
    if (theta_star) {
        require(theta_star->size() == target_map.count(),
                "RegressionExperimentConfig: theta_star dimension != target feature count");
    }
    if (theta_init) {
        require(theta_init->size() == hypothesis_map.count(),
                "RegressionExperimentConfig: theta_init dimension != hypothesis feature count");
    }
}

namespace {

VectorXd draw_uniform(CounterRng& rng, Index n, double lo, double hi) {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) {
        v[i] = rng.uniform(lo, hi);
    }
    return v;
}

VectorXd draw_box(CounterRng& rng, const VectorXd& lo, const VectorXd& hi) {
    VectorXd v(lo.size());
    for (Index i = 0; i < lo.size(); ++i) {
        v[i] = rng.uniform(lo[i], hi[i]);
    }
    return v;
}

}  // namespace

SequenceTrace RegressionRun::loss_trace() const {
    SequenceTrace trace(static_cast<Index>(steps.size()));
    for (Index t = 0; t < trace.size(); ++t) {
        trace[t] = steps[static_cast<size_t>(t)].loss;
    }
    return trace;
}

RegressionRun run_online_regression(const RegressionExperimentConfig& config) {
    config.validate();
    CounterRng rng(config.seed);

    RegressionRun run;
    // Draw order is part of the replay contract: theta*, theta_1, then inputs.
    run.theta_star =
        config.theta_star ? *config.theta_star : draw_uniform(rng, config.target_map.count(), -1.0, 1.0);
    run.theta_init = config.theta_init
                         ? *config.theta_init
                         : draw_uniform(rng, config.hypothesis_map.count(), -1.0, 1.0);

    OcpState state = make_ocp_state(run.theta_init, config.feasible_set, config.eta0);
    run.steps.reserve(static_cast<size_t>(config.horizon));
    for (Index t = 1; t <= config.horizon; ++t) {
        const VectorXd x = draw_box(rng, config.input_lower, config.input_upper);
        const double y = run.theta_star.dot(features(config.target_map, x));
        const RbfPredictor predictor{config.hypothesis_map, state.action};
        const double loss = stage_loss(predictor, x, y);
        if (!std::isfinite(loss)) {
            std::ostringstream msg;
            msg << "run_online_regression: non-finite loss at stage " << t;
            throw std::runtime_error(msg.str());
        }
        run.steps.push_back(RegressionStep{x, y, state.action, loss});
        run.ledger.append(loss, features(config.hypothesis_map, x), y, state.action);
        const VectorXd gradient = config.paper_literal_gradient
                                      ? stage_gradient_literal(predictor, x, y)
                                      : stage_gradient(predictor, x, y);
        state = gp_step(state, gradient);
    }
    run.theta_final = state.action;
    return run;
}

RepresentationalError representational_error(const RbfFeatureMap& map,
                                             const std::function<double(const VectorXd&)>& target,
                                             const VectorXd& input_lower,
                                             const VectorXd& input_upper, Index n_samples,
                                             std::uint64_t seed) {
    map.validate();
    require(static_cast<bool>(target), "representational_error: null target");
    require(n_samples >= map.count(),
            "representational_error: need at least as many samples as features");
    require(input_lower.size() == map.input_dimension() &&
                input_upper.size() == map.input_dimension(),
            "representational_error: input bounds do not match the feature map");
    require((input_lower.array() <= input_upper.array()).all(),
            "representational_error: input_lower > input_upper");

    CounterRng rng(seed);
    const Index m = map.count();
    MatrixXd design(n_samples, m);
    VectorXd values(n_samples);
    for (Index i = 0; i < n_samples; ++i) {
        const VectorXd x = [&] {
            VectorXd v(input_lower.size());
            for (Index j = 0; j < v.size(); ++j) {
                v[j] = rng.uniform(input_lower[j], input_upper[j]);
            }
            return v;
        }();
        design.row(i) = features(map, x).transpose();
        values[i] = target(x);
        require_finite(values[i], "representational_error target value");
    }
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(design);
    const VectorXd theta = cod.solve(values);

    RepresentationalError result;
    result.degenerate = cod.rank() < m;
    result.n_samples = n_samples;
    const VectorXd squared_residuals = (design * theta - values).array().square();
    result.estimate = squared_residuals.mean();
    const double variance =
        (squared_residuals.array() - result.estimate).square().sum() /
        static_cast<double>(n_samples - 1);
    result.standard_error = std::sqrt(variance / static_cast<double>(n_samples));
    return result;
}

}  // namespace noregret
