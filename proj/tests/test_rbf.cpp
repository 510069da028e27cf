#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "noregret/rbf.hpp"
#include "noregret/rng.hpp"
#include "support/oracles.hpp"

using namespace noregret;

namespace {

RbfFeatureMap line_map(std::initializer_list<double> centers,
                       std::initializer_list<double> scales) {
    RbfFeatureMap map;
    map.centers = MatrixXd(static_cast<Index>(centers.size()), 1);
    Index i = 0;
    for (double c : centers) {
        map.centers(i++, 0) = c;
    }
    map.scales = VectorXd(static_cast<Index>(scales.size()));
    i = 0;
    for (double s : scales) {
        map.scales[i++] = s;
    }
    return map;
}

RbfFeatureMap random_map(CounterRng& rng, Index m, Index d) {
    RbfFeatureMap map;
    map.centers = MatrixXd(m, d);
    map.scales = VectorXd(m);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < d; ++j) {
            map.centers(i, j) = rng.uniform(-2.0, 2.0);
        }
        map.scales[i] = rng.uniform(0.2, 2.0) * (rng.next_double() < 0.5 ? -1.0 : 1.0);
    }
    return map;
}

}  // namespace

TEST_CASE("feature at its own center is one") {
    const RbfFeatureMap map = line_map({-1.0, 0.5}, {0.7, 1.3});
    CHECK(features(map, -1.0)[0] == 1.0);
    CHECK(features(map, 0.5)[1] == 1.0);
    const VectorXd phi = features(map, 0.1);
    CHECK((phi.array() > 0.0).all());
    CHECK((phi.array() <= 1.0).all());
}

TEST_CASE("feature value follows the squared-exponential formula") {
    const RbfFeatureMap map = line_map({0.0}, {1.0});
    CHECK(features(map, 1.0)[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("length scales enter squared, so their sign is irrelevant") {
    const RbfFeatureMap plus = line_map({0.25}, {1.0});
    const RbfFeatureMap minus = line_map({0.25}, {-1.0});
    for (double x : {-2.0, -0.5, 0.0, 1.7}) {
        CHECK(features(plus, x)[0] == features(minus, x)[0]);
    }
}

TEST_CASE("zero weights predict zero everywhere") {
    const RbfPredictor predictor{line_map({-1.0, 1.0}, {1.0, 1.0}), VectorXd::Zero(2)};
    for (double x : {-2.0, 0.0, 2.0}) {
        CHECK(predict(predictor, x) == 0.0);
    }
}

TEST_CASE("a unit weight reads off its feature at the center") {
    VectorXd weights(2);
    weights << 1.0, 0.0;
    const RbfPredictor predictor{line_map({-1.0, 1.0}, {1.0, 1.0}), weights};
    CHECK(predict(predictor, -1.0) == doctest::Approx(1.0));
}

TEST_CASE("a realizable target is predicted exactly with zero loss") {
    CounterRng rng(0x11FE);
    const RbfFeatureMap map = line_map({-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0},
                                       {-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0});
    VectorXd theta_star(4);
    for (Index i = 0; i < 4; ++i) {
        theta_star[i] = rng.uniform(-1.0, 1.0);
    }
    const RbfPredictor predictor{map, theta_star};
    for (int k = 0; k < 20; ++k) {
        const double x = rng.uniform(-2.0, 2.0);
        const double y = theta_star.dot(features(map, x));
        CHECK(predict(predictor, x) == y);
        CHECK(stage_loss(predictor, x, y) == 0.0);
    }
}

TEST_CASE("stage loss is the squared prediction error") {
    const RbfPredictor predictor{line_map({0.0}, {1.0}), VectorXd::Constant(1, 2.0)};
    CHECK(stage_loss(predictor, 0.0, 0.0) == doctest::Approx(4.0));  // prediction 2, y 0
    CHECK(stage_loss(predictor, 0.0, 2.0) == 0.0);
}

TEST_CASE("stage loss is convex in the weights") {
    CounterRng rng(0xC0);
    const RbfFeatureMap map = line_map({-1.0, 0.0, 1.0}, {0.5, 1.0, 0.8});
    for (int k = 0; k < 200; ++k) {
        VectorXd a(3);
        VectorXd b(3);
        for (Index i = 0; i < 3; ++i) {
            a[i] = rng.uniform(-3.0, 3.0);
            b[i] = rng.uniform(-3.0, 3.0);
        }
        const double x = rng.uniform(-2.0, 2.0);
        const double y = rng.uniform(-2.0, 2.0);
        const double mid = stage_loss(RbfPredictor{map, 0.5 * (a + b)}, x, y);
        const double ends = 0.5 * stage_loss(RbfPredictor{map, a}, x, y) +
                            0.5 * stage_loss(RbfPredictor{map, b}, x, y);
        CHECK(mid <= ends + 1e-12);
    }
}

TEST_CASE("gradient vanishes at the loss minimum") {
    const RbfFeatureMap map = line_map({0.0, 1.0}, {1.0, 1.0});
    VectorXd theta(2);
    theta << 0.5, -0.25;
    const RbfPredictor predictor{map, theta};
    const double x = 0.3;
    const double y = predict(predictor, x);
    CHECK(stage_gradient(predictor, x, y).norm() == 0.0);
}

TEST_CASE("gradient of a unit-feature configuration") {
    // x at the center makes phi = 1, so d/dtheta (theta)^2 at theta = 2 is 4.
    const RbfPredictor predictor{line_map({0.0}, {1.0}), VectorXd::Constant(1, 2.0)};
    CHECK(stage_gradient(predictor, 0.0, 0.0)[0] == doctest::Approx(4.0));
}

TEST_CASE("gradient matches central finite differences on random configurations") {
    CounterRng rng(0xFD);
    for (int k = 0; k < 100; ++k) {
        const Index m = 1 + static_cast<Index>(rng.next_u64() % 5);
        const Index d = 1 + static_cast<Index>(rng.next_u64() % 3);
        const RbfFeatureMap map = random_map(rng, m, d);
        VectorXd theta(m);
        for (Index i = 0; i < m; ++i) {
            theta[i] = rng.uniform(-2.0, 2.0);
        }
        VectorXd x(d);
        for (Index j = 0; j < d; ++j) {
            x[j] = rng.uniform(-2.0, 2.0);
        }
        const double y = rng.uniform(-2.0, 2.0);
        const VectorXd analytic = stage_gradient(RbfPredictor{map, theta}, x, y);
        const VectorXd numeric = oracles::finite_difference_gradient(
            [&](const VectorXd& t) { return stage_loss(RbfPredictor{map, t}, x, y); }, theta,
            1e-6);
        const double scale = std::max(analytic.norm(), 1.0);
        CHECK((analytic - numeric).norm() / scale <= 1e-6);
    }
}

TEST_CASE("the as-printed gradient drops the target term") {
    const RbfPredictor predictor{line_map({0.0}, {1.0}), VectorXd::Constant(1, 2.0)};
    const double y = 5.0;
    // correct: 2 (2 - 5) = -6; literal: 2 * 2 = 4
    CHECK(stage_gradient(predictor, 0.0, y)[0] == doctest::Approx(-6.0));
    CHECK(stage_gradient_literal(predictor, 0.0, y)[0] == doctest::Approx(4.0));
}

TEST_CASE("vector-output predictor and gradient") {
    CounterRng rng(0x3D);
    const RbfFeatureMap map = line_map({-0.5, 0.5}, {1.0, 0.7});
    MatrixXd weights(2, 3);
    for (Index i = 0; i < 2; ++i) {
        for (Index j = 0; j < 3; ++j) {
            weights(i, j) = rng.uniform(-1.0, 1.0);
        }
    }
    const VectorXd x = VectorXd::Constant(1, 0.2);
    VectorXd y(3);
    y << 0.1, -0.4, 0.9;
    const VectorXd out = predict(map, weights, x);
    CHECK(out.size() == 3);
    CHECK(stage_loss(map, weights, x, y) == doctest::Approx((out - y).squaredNorm()));

    const MatrixXd analytic = stage_gradient(map, weights, x, y);
    for (Index i = 0; i < 2; ++i) {
        for (Index j = 0; j < 3; ++j) {
            MatrixXd plus = weights;
            MatrixXd minus = weights;
            plus(i, j) += 1e-6;
            minus(i, j) -= 1e-6;
            const double numeric =
                (stage_loss(map, plus, x, y) - stage_loss(map, minus, x, y)) / 2e-6;
            CHECK(analytic(i, j) == doctest::Approx(numeric).epsilon(1e-5));
        }
    }
}

TEST_CASE("invalid inputs are rejected") {
    const RbfFeatureMap map = line_map({0.0}, {1.0});
    CHECK_THROWS_AS(features(map, VectorXd::Zero(2)), std::invalid_argument);
    CHECK_THROWS_AS(features(map, std::nan("")), std::invalid_argument);
    RbfFeatureMap zero_scale = line_map({0.0}, {0.0});
    CHECK_THROWS_AS(zero_scale.validate(), std::invalid_argument);
}
