#pragma once

#include "noregret/common.hpp"

namespace noregret {

// Gaussian radial basis features phi_i(x) = exp(-||x - c_i||^2 / sigma_i^2).
// Length scales enter squared, so negative sigma_i are accepted and act like
// their absolute value.
struct RbfFeatureMap {
    MatrixXd centers;   // m x d, one center per row
    VectorXd scales;    // m

    Index count() const { return centers.rows(); }
    Index input_dimension() const { return centers.cols(); }

    void validate() const {
        require(centers.rows() >= 1, "RbfFeatureMap: need at least one center");
        require(scales.size() == centers.rows(), "RbfFeatureMap: one scale per center required");
        require_finite(centers, "RbfFeatureMap centers");
        require_finite(scales, "RbfFeatureMap scales");
        require((scales.array() != 0.0).all(), "RbfFeatureMap: zero length scale");
    }
};

template <typename Derived>
VectorXd features(const RbfFeatureMap& map, const Eigen::MatrixBase<Derived>& x) {
    require(x.size() == map.input_dimension(), "features: input dimension mismatch");
    require_finite(x, "features input");
    VectorXd phi(map.count());
    for (Index i = 0; i < map.count(); ++i) {
        const double sq = (x.transpose() - map.centers.row(i)).squaredNorm();
        const double scale = map.scales[i];
        phi[i] = std::exp(-sq / (scale * scale));
    }
    return phi;
}

inline VectorXd features(const RbfFeatureMap& map, double x) {
    return features(map, VectorXd::Constant(1, x));
}

// Linear-in-parameters predictor fhat(x; theta) = <theta, phi(x)>.
struct RbfPredictor {
    RbfFeatureMap map;
    VectorXd weights;  // theta, one weight per feature

    void validate() const {
        map.validate();
        require(weights.size() == map.count(), "RbfPredictor: weight/feature count mismatch");
        require_finite(weights, "RbfPredictor weights");
    }
};

template <typename Derived>
double predict(const RbfPredictor& predictor, const Eigen::MatrixBase<Derived>& x) {
    require(predictor.weights.size() == predictor.map.count(),
            "predict: weight/feature count mismatch");
    return predictor.weights.dot(features(predictor.map, x));
}

inline double predict(const RbfPredictor& predictor, double x) {
    return predict(predictor, VectorXd::Constant(1, x));
}

// Vector-output variant: columns of the weight matrix are per-output weights.
template <typename Derived>
VectorXd predict(const RbfFeatureMap& map, const MatrixXd& weights,
                 const Eigen::MatrixBase<Derived>& x) {
    require(weights.rows() == map.count(), "predict: weight rows != feature count");
    return weights.transpose() * features(map, x);
}

template <typename Derived>
double stage_loss(const RbfPredictor& predictor, const Eigen::MatrixBase<Derived>& x, double y) {
    require_finite(y, "stage_loss target");
    const double residual = predict(predictor, x) - y;
    return residual * residual;
}

inline double stage_loss(const RbfPredictor& predictor, double x, double y) {
    return stage_loss(predictor, VectorXd::Constant(1, x), y);
}

template <typename Derived>
double stage_loss(const RbfFeatureMap& map, const MatrixXd& weights,
                  const Eigen::MatrixBase<Derived>& x, const Eigen::Ref<const VectorXd>& y) {
    return (predict(map, weights, x) - y).squaredNorm();
}

// Gradient of the squared prediction error in theta: 2 (fhat - y) phi(x).
template <typename Derived>
VectorXd stage_gradient(const RbfPredictor& predictor, const Eigen::MatrixBase<Derived>& x,
                        double y) {
    require_finite(y, "stage_gradient target");
    const VectorXd phi = features(predictor.map, x);
    const double residual = predictor.weights.dot(phi) - y;
    return 2.0 * residual * phi;
}

inline VectorXd stage_gradient(const RbfPredictor& predictor, double x, double y) {
    return stage_gradient(predictor, VectorXd::Constant(1, x), y);
}

template <typename Derived>
MatrixXd stage_gradient(const RbfFeatureMap& map, const MatrixXd& weights,
                        const Eigen::MatrixBase<Derived>& x,
                        const Eigen::Ref<const VectorXd>& y) {
    const VectorXd phi = features(map, x);
    const VectorXd residual = weights.transpose() * phi - y;
    return 2.0 * phi * residual.transpose();
}

// The as-printed gradient 2 fhat(x; theta) phi(x), which drops the target
// term; selectable for comparison runs only, since the loss's own minimizer
// has nonzero "gradient" under it.
template <typename Derived>
VectorXd stage_gradient_literal(const RbfPredictor& predictor, const Eigen::MatrixBase<Derived>& x,
                                double /*y*/) {
    const VectorXd phi = features(predictor.map, x);
    return 2.0 * predictor.weights.dot(phi) * phi;
}

inline VectorXd stage_gradient_literal(const RbfPredictor& predictor, double x, double y) {
    return stage_gradient_literal(predictor, VectorXd::Constant(1, x), y);
}

}  // namespace noregret
