#pragma once

#include <functional>
#include <vector>

#include "noregret/common.hpp"
#include "noregret/rng.hpp"

namespace noregret {

// Simulators and bound machinery for disturbed contractions y' = phi(y) + d
// and disturbed stable recurrences x' = M x + d, including the amplification
// factor sigma = sum_i ||M^i|| entering the steady-state bound sigma * r.

// |largest eigenvalue| of a square matrix (QR eigensolver; desk-scale dims).
template <typename Derived>
double spectral_radius(const Eigen::MatrixBase<Derived>& matrix) {
    require(matrix.rows() == matrix.cols(), "spectral_radius: matrix must be square");
    require_finite(matrix, "spectral_radius matrix");
    Eigen::EigenSolver<MatrixX<typename Derived::Scalar>> solver(matrix.eval(), false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("spectral_radius: eigensolver failed to converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Spectral (operator 2-) norm: largest singular value.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& matrix) {
    require(matrix.size() > 0, "spectral_norm: empty matrix");
    require_finite(matrix, "spectral_norm matrix");
    Eigen::JacobiSVD<MatrixX<typename Derived::Scalar>> svd(matrix.eval());
    return svd.singularValues()[0];
}

struct SigmaSum {
    double value = 0.0;       // certified upper bound on sum_i ||M^i||
    double partial_sum = 0.0; // sum of the terms actually accumulated
    double tail_bound = 0.0;  // certified bound on the dropped tail, <= tail_tol
    Index terms = 0;          // number of powers summed (i = 0 .. terms-1)
};

// sum_{i=0..K} ||M^i|| plus a certified geometric tail bound <= tail_tol, so
// the returned value is within tail_tol above the true series. The tail after
// K terms uses ||M^{K+k}|| <= ||M^K|| * ||M^j||^floor(k/j) * max_{i<j} ||M^i||
// for the first power j with ||M^j|| < 1 (such j exists for any rho(M) < 1).
// Throws if no tail certificate emerges within 1e4 powers. min_terms forces a
// longer partial sum than the certificate needs.
SigmaSum sigma_sum(const MatrixXd& matrix, double tail_tol, Index min_terms = 0);

struct LinearRecurrence {
    MatrixXd transition;  // M, validated stable
    Index state_dim = 0;

    static LinearRecurrence make(MatrixXd transition);
};

struct ContractionSpec {
    std::function<VectorXd(const VectorXd&)> map;
    double lipschitz = 0.0;  // lambda in [0, 1)
    VectorXd fixed_point;
};

// Spot-checks the spec before any simulation is allowed: the declared fixed
// point maps to itself (1e-9) and random pairs in a ball of `radius` around it
// satisfy the lambda-Lipschitz inequality (slack 1e-9). Throws on violation.
void certify_contraction(const ContractionSpec& spec, double radius, Index n_pairs,
                         std::uint64_t seed);

class DisturbanceSignal {
  public:
    enum class Kind { IpVanishing, ConstantBounded, Recorded };

    // d_t = base[t] * direction; `base` is typically a scaled copy of the
    // power-of-two excursion sequence, so ||d_t|| vanishes with i.p. up to the
    // scale.
    static DisturbanceSignal ip_vanishing(SequenceTrace base, VectorXd direction);
    static DisturbanceSignal constant(double bound, VectorXd direction);
    static DisturbanceSignal recorded(std::vector<VectorXd> values);

    Kind kind() const { return kind_; }
    double bound() const { return bound_; }
    Index dimension() const { return direction_.size(); }

    // Disturbance applied between states t and t+1 (t 0-based, t < length
    // unless the signal is unbounded-horizon).
    VectorXd at(Index t) const;

    // Number of stored stages; constant signals have no intrinsic horizon.
    Index length() const;

  private:
    DisturbanceSignal() = default;

    Kind kind_ = Kind::ConstantBounded;
    SequenceTrace base_;
    VectorXd direction_;
    double bound_ = 0.0;
    std::vector<VectorXd> recorded_;
};

struct SimulationResult {
    MatrixXd trajectory;          // (T+1) x dim, row t is the state at time t
    SequenceTrace norm_trace;     // stage t entry: ||x_t|| (or distance to x*)
    SequenceTrace disturbance_norms;  // ||d_t|| for t = 0..T-1
};

// x_{t+1} = M x_t + d_t for T steps; norm trace covers t = 1..T.
SimulationResult simulate_linear(const LinearRecurrence& recurrence,
                                 const Eigen::Ref<const VectorXd>& x0,
                                 const DisturbanceSignal& disturbance, Index steps);

// y_{t+1} = phi(y_t) + d_t; trace holds ||y_t - x*||. Runs the contraction
// certificate (1e3 pairs) first.
SimulationResult simulate_contraction(const ContractionSpec& spec,
                                      const Eigen::Ref<const VectorXd>& y0,
                                      const DisturbanceSignal& disturbance, Index steps,
                                      double certificate_radius = 10.0);

}  // namespace noregret
