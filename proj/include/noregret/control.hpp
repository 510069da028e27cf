#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noregret/common.hpp"
#include "noregret/geometry.hpp"

namespace noregret {

// Model-reference adaptive control of an Euler-discretized rigid pendulum.
// The control law cancels the known drift and a (known, zero, or learned)
// model-error term, leaving the linear reference dynamics xdd = K (xi - x);
// the tracking error then obeys e_{t+1} = M e_t + d_t with d_t proportional
// to the instantaneous model-prediction error.

struct PendulumParams {
    double mass = 1.0;        // kg
    double length = 1.0;      // m
    double gravity = 9.81;    // m/s^2
    double friction = 0.1;    // viscous joint friction coefficient
    double time_step = 0.01;  // tau, s
    Index horizon = 3000;     // steps

    void validate() const {
        require(mass > 0.0 && length > 0.0 && gravity > 0.0 && time_step > 0.0,
                "PendulumParams: mass, length, gravity, time_step must be positive");
        require(friction >= 0.0, "PendulumParams: friction must be nonnegative");
        require(horizon >= 1, "PendulumParams: horizon must be >= 1");
    }
};

// f(x) = sum_i w_i exp(sign * |x1 - c_i| / s_i). The decaying sign (-1) is the
// default Laplacian-bump reading; +1 selects the as-printed growing exponent.
struct ModelErrorMixture {
    VectorXd weights;
    VectorXd centers;
    VectorXd scales;
    double exponent_sign = -1.0;

    static ModelErrorMixture reference();  // w* = [-12,-10,10,12], c = [-pi/2,0,pi/2,pi]

    void validate() const {
        require(weights.size() == centers.size() && weights.size() == scales.size(),
                "ModelErrorMixture: weights/centers/scales lengths differ");
        require(weights.size() >= 1, "ModelErrorMixture: empty mixture");
        require((scales.array() > 0.0).all(), "ModelErrorMixture: scales must be positive");
        require(exponent_sign == 1.0 || exponent_sign == -1.0,
                "ModelErrorMixture: exponent_sign must be +1 or -1");
        require_finite(weights, "ModelErrorMixture weights");
        require_finite(centers, "ModelErrorMixture centers");
    }
};

enum class Scenario { TrueModel, ZeroModel, GpAdaptive };

std::string scenario_name(Scenario scenario);
Scenario scenario_from_name(const std::string& name);

struct ControllerConfig {
    double kp = 4.0;
    double kd = 2.0;  // kd^2 < 4 kp: underdamped reference
    Vector2d target;  // xi
    Scenario scenario = Scenario::GpAdaptive;
    FeasibleSetXd theta_set = FeasibleSetXd::box(VectorXd::Constant(4, -20.0),
                                                 VectorXd::Constant(4, 20.0));
    double eta0 = 0.5;
    VectorXd theta0 = VectorXd::Zero(4);

    ControllerConfig();

    void validate(const PendulumParams& params, const ModelErrorMixture& mix) const;
};

double input_gain_b(const PendulumParams& params);  // b = 1 / (m l^2)

// Known drift a(x) = -(g/l) sin(x1) - (friction / (m l^2)) x2.
double drift_a(const PendulumParams& params, const Vector2d& x);

double model_error_f(const ModelErrorMixture& mix, const Vector2d& x);

// Features of the adaptive predictor: the mixture's own exponential bumps, so
// the true f is realizable as <w*, phi(x)>.
VectorXd control_features(const ModelErrorMixture& mix, const Vector2d& x);

double predict_model_error(const ModelErrorMixture& mix, const Eigen::Ref<const VectorXd>& theta,
                           const Vector2d& x);

// Feedback-linearizing law u = b^-1 (-a(x) - fhat(x) + kp (xi1 - x1) + kd (xi2 - x2)),
// with fhat per scenario: the true f, zero, or <theta, phi(x)>.
double control_u(const PendulumParams& params, const ControllerConfig& config,
                 const ModelErrorMixture& mix, const Eigen::Ref<const VectorXd>& theta,
                 const Vector2d& x);

double plant_acceleration(const PendulumParams& params, const ModelErrorMixture& mix,
                          const Vector2d& x, double u);

// First-order Euler step of the plant.
Vector2d step_plant(const PendulumParams& params, const ModelErrorMixture& mix, const Vector2d& x,
                    double u);

// Euler step of the reference system xdd_ref = kp (xi1 - xref1) + kd (xi2 - xref2).
Vector2d step_reference(const ControllerConfig& config, const PendulumParams& params,
                        const Vector2d& x_ref);

// Discrete error transition M = [[1, tau], [-tau kp, 1 - tau kd]]; throws with
// the offending (K, tau) when unstable.
Matrix2d error_matrix(const ControllerConfig& config, const PendulumParams& params);

// Certified global bound on sup_x |f(x) - fhat(x; theta)| over the feasible
// parameter set, when one exists. With the decaying exponent the features lie
// in (0, 1], so the gap is bounded by the per-feature weight deviations; the
// growing exponent admits no global bound and yields an empty optional.
std::optional<double> model_error_gap_bound(const ModelErrorMixture& mix,
                                            const FeasibleSetXd& theta_set);

struct LearningFeedback {
    double loss = 0.0;
    VectorXd gradient;
};

// Squared residual between the predictor and the model error implied by the
// realized acceleration, fhat(x;theta) - (xdd - a(x) - b u), with gradient
// 2 * residual * phi(x).
LearningFeedback learning_feedback(const ModelErrorMixture& mix,
                                   const Eigen::Ref<const VectorXd>& theta, const Vector2d& x,
                                   double accel_observed, double u,
                                   const PendulumParams& params);

struct ControlStep {
    Vector2d x;
    Vector2d x_ref;
    Vector2d error;       // x_ref - x, recorded exactly
    double u = 0.0;
    double loss = 0.0;    // (fhat - f)^2 in the noise-free simulator
    double d = 0.0;       // tau * (f - fhat), the error-recurrence disturbance
    VectorXd theta;
};

struct ControlTraceBundle {
    Scenario scenario = Scenario::GpAdaptive;
    std::vector<ControlStep> steps;
    PendulumParams params;
    ModelErrorMixture mix;
    ControllerConfig config;

    SequenceTrace error_norm_trace() const;
    SequenceTrace target_distance_trace() const;  // ||xi - x_t||
    SequenceTrace loss_trace() const;
};

// Closed loop from x0 = xref0 = (0, 0): per step compute u with theta_t, step
// the plant, observe the acceleration, then (GpAdaptive only) feed the
// prediction residual back through a Greedy Projection update.
ControlTraceBundle run_pendulum_experiment(const PendulumParams& params,
                                           const ModelErrorMixture& mix,
                                           const ControllerConfig& config);

}  // namespace noregret
