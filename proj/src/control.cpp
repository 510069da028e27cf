#include "noregret/control.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "noregret/dynamics.hpp"
#include "noregret/ocp.hpp"

namespace noregret {

ModelErrorMixture ModelErrorMixture::reference() {
    ModelErrorMixture mix;
    mix.weights = VectorXd(4);
    mix.weights << -12.0, -10.0, 10.0, 12.0;
    mix.centers = VectorXd(4);
    mix.centers << -std::numbers::pi / 2.0, 0.0, std::numbers::pi / 2.0, std::numbers::pi;
    mix.scales = VectorXd(4);
    mix.scales << 1.0, 1.0, 0.5, 0.5;
    return mix;
}

ControllerConfig::ControllerConfig() : target(std::numbers::pi, 0.0) {}

void ControllerConfig::validate(const PendulumParams& params,
                                const ModelErrorMixture& mix) const {
    params.validate();
    mix.validate();
    require(kp > 0.0 && kd > 0.0, "ControllerConfig: gains must be positive");
    require_finite(target, "ControllerConfig target");
    require(eta0 >= 0.0 && std::isfinite(eta0), "ControllerConfig: bad eta0");
    require(theta0.size() == mix.weights.size(),
            "ControllerConfig: theta0 dimension != mixture size");
    require(theta_set.dimension() == mix.weights.size(),
            "ControllerConfig: theta feasible set dimension != mixture size");
    error_matrix(*this, params);  // throws when (K, tau) is unstable
}

std::string scenario_name(Scenario scenario) {
    switch (scenario) {
        case Scenario::TrueModel:
            return "true_model";
        case Scenario::ZeroModel:
            return "zero_model";
        case Scenario::GpAdaptive:
            return "gp_adaptive";
    }
    throw std::logic_error("scenario_name: unreachable");
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "true_model") {
        return Scenario::TrueModel;
    }
    if (name == "zero_model") {
        return Scenario::ZeroModel;
    }
    if (name == "gp_adaptive") {
        return Scenario::GpAdaptive;
    }
    throw std::invalid_argument("unknown scenario '" + name +
                                "' (expected true_model, zero_model or gp_adaptive)");
}

double input_gain_b(const PendulumParams& params) {
    return 1.0 / (params.mass * params.length * params.length);
}

double drift_a(const PendulumParams& params, const Vector2d& x) {
    require_finite(x, "drift_a state");
    return -(params.gravity / params.length) * std::sin(x[0]) -
           params.friction / (params.mass * params.length * params.length) * x[1];
}

double model_error_f(const ModelErrorMixture& mix, const Vector2d& x) {
    require_finite(x, "model_error_f state");
    double f = 0.0;
    for (Index i = 0; i < mix.weights.size(); ++i) {
        f += mix.weights[i] *
             std::exp(mix.exponent_sign * std::abs(x[0] - mix.centers[i]) / mix.scales[i]);
    }
    return f;
}

VectorXd control_features(const ModelErrorMixture& mix, const Vector2d& x) {
    VectorXd phi(mix.weights.size());
    for (Index i = 0; i < phi.size(); ++i) {
        phi[i] = std::exp(mix.exponent_sign * std::abs(x[0] - mix.centers[i]) / mix.scales[i]);
    }
    return phi;
}

double predict_model_error(const ModelErrorMixture& mix, const Eigen::Ref<const VectorXd>& theta,
                           const Vector2d& x) {
    require(theta.size() == mix.weights.size(), "predict_model_error: theta dimension mismatch");
    return theta.dot(control_features(mix, x));
}

namespace {

double scenario_fhat(const PendulumParams&, const ControllerConfig& config,
                     const ModelErrorMixture& mix, const Eigen::Ref<const VectorXd>& theta,
                     const Vector2d& x) {
    switch (config.scenario) {
        case Scenario::TrueModel:
            return model_error_f(mix, x);
        case Scenario::ZeroModel:
            return 0.0;
        case Scenario::GpAdaptive:
            return predict_model_error(mix, theta, x);
    }
    throw std::logic_error("scenario_fhat: unreachable");
}

}  // namespace

double control_u(const PendulumParams& params, const ControllerConfig& config,
                 const ModelErrorMixture& mix, const Eigen::Ref<const VectorXd>& theta,
                 const Vector2d& x) {
    require_finite(x, "control_u state");
    const double fhat = scenario_fhat(params, config, mix, theta, x);
    const double xdd_ref = config.kp * (config.target[0] - x[0]) +
                           config.kd * (config.target[1] - x[1]);
    return (-drift_a(params, x) - fhat + xdd_ref) / input_gain_b(params);
}

double plant_acceleration(const PendulumParams& params, const ModelErrorMixture& mix,
                          const Vector2d& x, double u) {
    return model_error_f(mix, x) + drift_a(params, x) + input_gain_b(params) * u;
}

Vector2d step_plant(const PendulumParams& params, const ModelErrorMixture& mix, const Vector2d& x,
                    double u) {
    require_finite(x, "step_plant state");
    require_finite(u, "step_plant input");
    const double accel = plant_acceleration(params, mix, x, u);
    Vector2d next(x[0] + params.time_step * x[1], x[1] + params.time_step * accel);
    if (!next.allFinite()) {
        std::ostringstream msg;
        msg << "step_plant: non-finite successor from x = (" << x[0] << ", " << x[1]
            << "), u = " << u;
        throw std::runtime_error(msg.str());
    }
    return next;
}

Vector2d step_reference(const ControllerConfig& config, const PendulumParams& params,
                        const Vector2d& x_ref) {
    require_finite(x_ref, "step_reference state");
    const double xdd = config.kp * (config.target[0] - x_ref[0]) +
                       config.kd * (config.target[1] - x_ref[1]);
    return Vector2d(x_ref[0] + params.time_step * x_ref[1],
                    x_ref[1] + params.time_step * xdd);
}

Matrix2d error_matrix(const ControllerConfig& config, const PendulumParams& params) {
    const double tau = params.time_step;
    Matrix2d m;
    m << 1.0, tau, -tau * config.kp, 1.0 - tau * config.kd;
    const double rho = spectral_radius(m);
    if (rho >= 1.0) {
        std::ostringstream msg;
        msg << "error_matrix: rho(M) = " << rho << " >= 1 for kp = " << config.kp
            << ", kd = " << config.kd << ", tau = " << tau;
        throw std::invalid_argument(msg.str());
    }
    return m;
}

std::optional<double> model_error_gap_bound(const ModelErrorMixture& mix,
                                            const FeasibleSetXd& theta_set) {
    mix.validate();
    require(theta_set.dimension() == mix.weights.size(),
            "model_error_gap_bound: set dimension != mixture size");
    if (mix.exponent_sign > 0.0) {
        return std::nullopt;
    }
    double bound = 0.0;
    for (Index i = 0; i < mix.weights.size(); ++i) {
        double deviation;
        if (theta_set.is_box()) {
            deviation = std::max(std::abs(mix.weights[i] - theta_set.as_box().lower[i]),
                                 std::abs(mix.weights[i] - theta_set.as_box().upper[i]));
        } else {
            deviation = std::abs(mix.weights[i] - theta_set.as_ball().center[i]) +
                        theta_set.as_ball().radius;
        }
        bound += deviation;  // sup phi_i = 1 for the decaying exponent
    }
    return bound;
}

LearningFeedback learning_feedback(const ModelErrorMixture& mix,
                                   const Eigen::Ref<const VectorXd>& theta, const Vector2d& x,
                                   double accel_observed, double u,
                                   const PendulumParams& params) {
    require_finite(accel_observed, "learning_feedback acceleration");
    require_finite(u, "learning_feedback input");
    const VectorXd phi = control_features(mix, x);
    const double implied_f = accel_observed - drift_a(params, x) - input_gain_b(params) * u;
    const double residual = theta.dot(phi) - implied_f;
    return LearningFeedback{residual * residual, 2.0 * residual * phi};
}

SequenceTrace ControlTraceBundle::error_norm_trace() const {
    SequenceTrace trace(static_cast<Index>(steps.size()));
    for (Index t = 0; t < trace.size(); ++t) {
        trace[t] = steps[static_cast<size_t>(t)].error.norm();
    }
    return trace;
}

SequenceTrace ControlTraceBundle::target_distance_trace() const {
    SequenceTrace trace(static_cast<Index>(steps.size()));
    for (Index t = 0; t < trace.size(); ++t) {
        trace[t] = (config.target - steps[static_cast<size_t>(t)].x).norm();
    }
    return trace;
}

SequenceTrace ControlTraceBundle::loss_trace() const {
    SequenceTrace trace(static_cast<Index>(steps.size()));
    for (Index t = 0; t < trace.size(); ++t) {
        trace[t] = steps[static_cast<size_t>(t)].loss;
    }
    return trace;
}

ControlTraceBundle run_pendulum_experiment(const PendulumParams& params,
                                           const ModelErrorMixture& mix,
                                           const ControllerConfig& config) {
    config.validate(params, mix);

    ControlTraceBundle bundle;
    bundle.scenario = config.scenario;
    bundle.params = params;
    bundle.mix = mix;
    bundle.config = config;
    bundle.steps.reserve(static_cast<size_t>(params.horizon));

    if (config.scenario == Scenario::GpAdaptive &&
        !model_error_gap_bound(mix, config.theta_set)) {
        std::cerr << "run_pendulum_experiment: growing-exponent features admit no global "
                     "model-error gap bound; the permanence guarantee's hypothesis is "
                     "unverified for this run\n";
    }

    Vector2d x = Vector2d::Zero();
    Vector2d x_ref = Vector2d::Zero();
    OcpState learner = make_ocp_state(config.theta0, config.theta_set, config.eta0);

    for (Index t = 1; t <= params.horizon; ++t) {
        const VectorXd theta = learner.action;
        const double u = control_u(params, config, mix, theta, x);
        const double accel = plant_acceleration(params, mix, x, u);
        const double f = model_error_f(mix, x);
        const double fhat = scenario_fhat(params, config, mix, theta, x);

        ControlStep step;
        step.x = x;
        step.x_ref = x_ref;
        step.error = x_ref - x;
        step.u = u;
        step.loss = (fhat - f) * (fhat - f);  // the deployed predictor's error
        step.d = params.time_step * (f - fhat);
        step.theta = theta;
        bundle.steps.push_back(std::move(step));

        const Vector2d x_next = step_plant(params, mix, x, u);
        const Vector2d x_ref_next = step_reference(config, params, x_ref);
        if (!x_next.allFinite() || !x_ref_next.allFinite()) {
            std::ostringstream msg;
            msg << "run_pendulum_experiment: state blow-up at stage " << t;
            throw std::runtime_error(msg.str());
        }
        if (config.scenario == Scenario::GpAdaptive) {
            learner = gp_step(learner, learning_feedback(mix, theta, x, accel, u, params).gradient);
        }
        x = x_next;
        x_ref = x_ref_next;
    }
    return bundle;
}

}  // namespace noregret
