#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <variant>

#include "noregret/common.hpp"

namespace noregret {

// Convex feasible sets with closed-form Euclidean projections. Only boxes and
// balls are supported; neither experiment needs a general polytope, and QP-free
// projections keep the online update exact.

template <typename Scalar>
struct BoxSet {
    VectorX<Scalar> lower;
    VectorX<Scalar> upper;
};

template <typename Scalar>
struct BallSet {
    VectorX<Scalar> center;
    Scalar radius;
};

template <typename Scalar = double>
class FeasibleSet {
  public:
    static FeasibleSet box(VectorX<Scalar> lower, VectorX<Scalar> upper) {
        require(lower.size() == upper.size(), "FeasibleSet::box: bound dimensions differ");
        require(lower.size() > 0, "FeasibleSet::box: empty bounds");
        require_finite(lower, "FeasibleSet::box lower");
        require_finite(upper, "FeasibleSet::box upper");
        require((lower.array() <= upper.array()).all(),
                "FeasibleSet::box: lower[i] > upper[i] for some i");
        return FeasibleSet(BoxSet<Scalar>{std::move(lower), std::move(upper)});
    }

    static FeasibleSet ball(VectorX<Scalar> center, Scalar radius) {
        require(center.size() > 0, "FeasibleSet::ball: empty center");
        require_finite(center, "FeasibleSet::ball center");
        require(radius > Scalar(0), "FeasibleSet::ball: radius must be positive");
        return FeasibleSet(BallSet<Scalar>{std::move(center), radius});
    }

    Index dimension() const {
        return std::visit(
            [](const auto& s) {
                if constexpr (std::is_same_v<std::decay_t<decltype(s)>, BoxSet<Scalar>>) {
                    return s.lower.size();
                } else {
                    return s.center.size();
                }
            },
            set_);
    }

    bool is_box() const { return std::holds_alternative<BoxSet<Scalar>>(set_); }
    const BoxSet<Scalar>& as_box() const { return std::get<BoxSet<Scalar>>(set_); }
    const BallSet<Scalar>& as_ball() const { return std::get<BallSet<Scalar>>(set_); }

  private:
    explicit FeasibleSet(std::variant<BoxSet<Scalar>, BallSet<Scalar>> set)
        : set_(std::move(set)) {}

    std::variant<BoxSet<Scalar>, BallSet<Scalar>> set_;
};

using FeasibleSetXd = FeasibleSet<double>;

namespace detail {

template <typename Scalar, typename Derived>
void require_same_dimension(const FeasibleSet<Scalar>& set,
                            const Eigen::MatrixBase<Derived>& point, const char* op) {
    if (point.size() != set.dimension()) {
        std::ostringstream msg;
        msg << op << ": point dimension " << point.size() << " != set dimension "
            << set.dimension();
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace detail

// Euclidean projection onto the set. Box: per-coordinate clamp. Ball: radial
// scaling of the excess. Both are the unique nearest points.
template <typename Derived>
VectorX<typename Derived::Scalar> project(const FeasibleSet<typename Derived::Scalar>& set,
                                          const Eigen::MatrixBase<Derived>& point) {
    using Scalar = typename Derived::Scalar;
    detail::require_same_dimension(set, point, "project");
    if (set.is_box()) {
        const auto& box = set.as_box();
        return point.cwiseMax(box.lower).cwiseMin(box.upper);
    }
    const auto& ball = set.as_ball();
    VectorX<Scalar> offset = point - ball.center;
    const Scalar norm = offset.norm();
    if (norm <= ball.radius) {
        return point;
    }
    return ball.center + offset * (ball.radius / norm);
}

// True iff the point violates no constraint by more than tol.
template <typename Derived>
bool contains(const FeasibleSet<typename Derived::Scalar>& set,
              const Eigen::MatrixBase<Derived>& point,
              typename Derived::Scalar tol = typename Derived::Scalar(0)) {
    detail::require_same_dimension(set, point, "contains");
    require(tol >= typename Derived::Scalar(0), "contains: tol must be nonnegative");
    if (set.is_box()) {
        const auto& box = set.as_box();
        return (point.array() >= box.lower.array() - tol).all() &&
               (point.array() <= box.upper.array() + tol).all();
    }
    const auto& ball = set.as_ball();
    return (point - ball.center).norm() <= ball.radius + tol;
}

}  // namespace noregret
