#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "noregret/common.hpp"
#include "noregret/geometry.hpp"
#include "noregret/ocp.hpp"
#include "noregret/rbf.hpp"

namespace noregret {

// Online RBF regression driven by Greedy Projection: per stage, draw x_t, pay
// the squared prediction error against y_t = <theta*, phi_target(x_t)>, and
// descend its gradient.

RbfFeatureMap default_regression_map();

struct RegressionExperimentConfig {
    RbfFeatureMap hypothesis_map = default_regression_map();
    RbfFeatureMap target_map = default_regression_map();
    VectorXd input_lower = VectorXd::Constant(1, -2.0);
    VectorXd input_upper = VectorXd::Constant(1, 2.0);
    Index horizon = 100;
    std::uint64_t seed = 0;
    double eta0 = 1.0;
    FeasibleSetXd feasible_set = FeasibleSetXd::box(VectorXd::Constant(4, -10.0),
                                                    VectorXd::Constant(4, 10.0));
    bool paper_literal_gradient = false;
    // Unset weights are drawn i.i.d. uniform on [-1, 1] from the experiment
    // stream, theta* first, then theta_1, then the inputs.
    std::optional<VectorXd> theta_star;
    std::optional<VectorXd> theta_init;

    void validate() const;
};

struct RegressionStep {
    VectorXd input;
    double target = 0.0;
    VectorXd theta;  // the weights used for this stage's prediction
    double loss = 0.0;
};

struct RegressionRun {
    std::vector<RegressionStep> steps;
    RegretLedger ledger;
    VectorXd theta_star;
    VectorXd theta_init;
    VectorXd theta_final;

    SequenceTrace loss_trace() const;
};

RegressionRun run_online_regression(const RegressionExperimentConfig& config);

struct RepresentationalError {
    double estimate = 0.0;        // Monte Carlo inf_theta E[(<theta,phi(x)> - f(x))^2]
    double standard_error = 0.0;  // of the mean of squared residuals at the fitted theta
    Index n_samples = 0;
    bool degenerate = false;      // design matrix was rank-deficient
};

RepresentationalError representational_error(const RbfFeatureMap& map,
                                             const std::function<double(const VectorXd&)>& target,
                                             const VectorXd& input_lower,
                                             const VectorXd& input_upper, Index n_samples,
                                             std::uint64_t seed);

}  // namespace noregret
