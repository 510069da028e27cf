#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace noregret {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Eigen::Index;
using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

// Scalar-valued observation sequence s_1, ..., s_T (stage t maps to entry t-1).
using SequenceTrace = Eigen::VectorXd;

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& values, const std::string& what) {
    if (!values.allFinite()) {
        throw std::invalid_argument(what + ": non-finite entries");
    }
}

inline void require_finite(double value, const std::string& what) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument(what + ": non-finite value");
    }
}

// Compensated (Kahan) accumulator; keeps running sums accurate over 1e6 terms.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace noregret
