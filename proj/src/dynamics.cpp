#include "noregret/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace noregret {

SigmaSum sigma_sum(const MatrixXd& matrix, double tail_tol, Index min_terms) {
    require(matrix.rows() == matrix.cols(), "sigma_sum: matrix must be square");
    require(std::isfinite(tail_tol) && tail_tol > 0.0, "sigma_sum: tail_tol must be positive");
    require(spectral_radius(matrix) < 1.0, "sigma_sum: spectral radius must be < 1");

    constexpr Index kMaxPowers = 10000;
    const Index dim = matrix.rows();

    SigmaSum result;
    KahanSum partial;
    MatrixXd power = MatrixXd::Identity(dim, dim);  // M^i
    double beta = 0.0;        // ||M^j|| for the first power j with ||M^j|| < 1
    Index j = 0;
    double prefix_max = 0.0;  // max_{i<j} ||M^i||, the block remainder factor

    for (Index i = 0; i < kMaxPowers; ++i) {
        const double norm = spectral_norm(power);
        if (!std::isfinite(norm)) {
            throw std::runtime_error("sigma_sum: matrix power overflowed");
        }
        partial.add(norm);
        if (j == 0) {
            if (i > 0 && norm < 1.0) {
                j = i;
                beta = norm;
            } else {
                prefix_max = std::max(prefix_max, norm);
            }
        }
        if (j > 0 && i + 1 >= min_terms) {
            // K = i+1 terms are in the partial sum. Splitting each remaining
            // exponent K+k as K + j*floor(k/j) + (k mod j) gives
            // ||M^{K+k}|| <= ||M^K|| * beta^floor(k/j) * prefix_max, and the
            // geometric block sum is j / (1 - beta).
            const double head = spectral_norm(power * matrix);  // ||M^K||
            const double tail =
                head * prefix_max * static_cast<double>(j) / (1.0 - beta);
            if (tail <= tail_tol) {
                result.partial_sum = partial.value();
                result.tail_bound = tail;
                result.value = result.partial_sum + result.tail_bound;
                result.terms = i + 1;
                return result;
            }
        }
        power *= matrix;
    }
    std::ostringstream msg;
    msg << "sigma_sum: tail not certified within " << kMaxPowers
        << " powers (partial sum " << partial.value() << ")";
    throw std::runtime_error(msg.str());
}

LinearRecurrence LinearRecurrence::make(MatrixXd transition) {
    require(transition.rows() == transition.cols(), "LinearRecurrence: matrix must be square");
    const double rho = spectral_radius(transition);
    if (rho >= 1.0) {
        std::ostringstream msg;
        msg << "LinearRecurrence: spectral radius " << rho << " >= 1";
        throw std::invalid_argument(msg.str());
    }
    LinearRecurrence rec;
    rec.state_dim = transition.rows();
    rec.transition = std::move(transition);
    return rec;
}

void certify_contraction(const ContractionSpec& spec, double radius, Index n_pairs,
                         std::uint64_t seed) {
    require(static_cast<bool>(spec.map), "certify_contraction: null map");
    require(spec.lipschitz >= 0.0 && spec.lipschitz < 1.0,
            "certify_contraction: lipschitz constant must be in [0, 1)");
    require(spec.fixed_point.size() > 0, "certify_contraction: empty fixed point");
    require(radius > 0.0, "certify_contraction: radius must be positive");

    const double fixed_point_drift = (spec.map(spec.fixed_point) - spec.fixed_point).norm();
    if (fixed_point_drift > 1e-9) {
        std::ostringstream msg;
        msg << "certify_contraction: declared fixed point moves by " << fixed_point_drift;
        throw std::invalid_argument(msg.str());
    }

    CounterRng rng(seed);
    const Index dim = spec.fixed_point.size();
    for (Index k = 0; k < n_pairs; ++k) {
        VectorXd a(dim);
        VectorXd b(dim);
        for (Index i = 0; i < dim; ++i) {
            a[i] = spec.fixed_point[i] + rng.uniform(-radius, radius);
            b[i] = spec.fixed_point[i] + rng.uniform(-radius, radius);
        }
        const double image_gap = (spec.map(a) - spec.map(b)).norm();
        const double gap = (a - b).norm();
        if (image_gap > spec.lipschitz * gap + 1e-9) {
            std::ostringstream msg;
            msg << "certify_contraction: Lipschitz violation on sampled pair (" << image_gap
                << " > " << spec.lipschitz << " * " << gap << ")";
            throw std::invalid_argument(msg.str());
        }
    }
}

DisturbanceSignal DisturbanceSignal::ip_vanishing(SequenceTrace base, VectorXd direction) {
    require(base.size() > 0, "DisturbanceSignal: empty base trace");
    require_finite(base, "DisturbanceSignal base");
    require(direction.size() > 0 && direction.norm() > 0.0,
            "DisturbanceSignal: zero direction");
    DisturbanceSignal d;
    d.kind_ = Kind::IpVanishing;
    d.direction_ = direction / direction.norm();
    d.base_ = std::move(base);
    d.bound_ = d.base_.cwiseAbs().maxCoeff();
    return d;
}

DisturbanceSignal DisturbanceSignal::constant(double bound, VectorXd direction) {
    require(std::isfinite(bound) && bound >= 0.0, "DisturbanceSignal: bound must be >= 0");
    require(direction.size() > 0 && direction.norm() > 0.0,
            "DisturbanceSignal: zero direction");
    DisturbanceSignal d;
    d.kind_ = Kind::ConstantBounded;
    d.direction_ = direction / direction.norm();
    d.bound_ = bound;
    return d;
}

DisturbanceSignal DisturbanceSignal::recorded(std::vector<VectorXd> values) {
    require(!values.empty(), "DisturbanceSignal: empty recording");
    DisturbanceSignal d;
    d.kind_ = Kind::Recorded;
    d.direction_ = VectorXd::Zero(values.front().size());
    d.bound_ = 0.0;
    for (const auto& v : values) {
        require(v.size() == values.front().size(), "DisturbanceSignal: ragged recording");
        require_finite(v, "DisturbanceSignal recorded value");
        d.bound_ = std::max(d.bound_, v.norm());
    }
    d.recorded_ = std::move(values);
    return d;
}

VectorXd DisturbanceSignal::at(Index t) const {
    require(t >= 0, "DisturbanceSignal::at: negative index");
    switch (kind_) {
        case Kind::IpVanishing:
            require(t < base_.size(), "DisturbanceSignal::at: index past base trace");
            return base_[t] * direction_;
        case Kind::ConstantBounded:
            return bound_ * direction_;
        case Kind::Recorded:
            require(t < static_cast<Index>(recorded_.size()),
                    "DisturbanceSignal::at: index past recording");
            return recorded_[static_cast<size_t>(t)];
    }
    throw std::logic_error("DisturbanceSignal::at: unreachable");
}

Index DisturbanceSignal::length() const {
    switch (kind_) {
        case Kind::IpVanishing:
            return base_.size();
        case Kind::ConstantBounded:
            return -1;
        case Kind::Recorded:
            return static_cast<Index>(recorded_.size());
    }
    throw std::logic_error("DisturbanceSignal::length: unreachable");
}

namespace {

void check_horizon(const DisturbanceSignal& disturbance, Index steps) {
    require(steps >= 1, "simulate: need at least one step");
    if (disturbance.length() >= 0) {
        require(disturbance.length() >= steps,
                "simulate: disturbance signal shorter than the simulation horizon");
    }
}

}  // namespace

SimulationResult simulate_linear(const LinearRecurrence& recurrence,
                                 const Eigen::Ref<const VectorXd>& x0,
                                 const DisturbanceSignal& disturbance, Index steps) {
    require(x0.size() == recurrence.state_dim, "simulate_linear: x0 dimension mismatch");
    require(disturbance.dimension() == recurrence.state_dim,
            "simulate_linear: disturbance dimension mismatch");
    check_horizon(disturbance, steps);

    SimulationResult result;
    result.trajectory.resize(steps + 1, recurrence.state_dim);
    result.norm_trace.resize(steps);
    result.disturbance_norms.resize(steps);
    VectorXd x = x0;
    result.trajectory.row(0) = x.transpose();
    for (Index t = 0; t < steps; ++t) {
        const VectorXd d = disturbance.at(t);
        x = recurrence.transition * x + d;
        if (!x.allFinite()) {
            std::ostringstream msg;
            msg << "simulate_linear: non-finite state at step " << t + 1;
            throw std::runtime_error(msg.str());
        }
        result.trajectory.row(t + 1) = x.transpose();
        result.norm_trace[t] = x.norm();
        result.disturbance_norms[t] = d.norm();
    }
    return result;
}

SimulationResult simulate_contraction(const ContractionSpec& spec,
                                      const Eigen::Ref<const VectorXd>& y0,
                                      const DisturbanceSignal& disturbance, Index steps,
                                      double certificate_radius) {
    require(y0.size() == spec.fixed_point.size(), "simulate_contraction: y0 dimension mismatch");
    require(disturbance.dimension() == spec.fixed_point.size(),
            "simulate_contraction: disturbance dimension mismatch");
    check_horizon(disturbance, steps);
    certify_contraction(spec, certificate_radius, 1000, /*seed=*/0x5eedu);

    SimulationResult result;
    result.trajectory.resize(steps + 1, y0.size());
    result.norm_trace.resize(steps);
    result.disturbance_norms.resize(steps);
    VectorXd y = y0;
    result.trajectory.row(0) = y.transpose();
    for (Index t = 0; t < steps; ++t) {
        const VectorXd d = disturbance.at(t);
        y = spec.map(y) + d;
        if (!y.allFinite()) {
            std::ostringstream msg;
            msg << "simulate_contraction: non-finite state at step " << t + 1;
            throw std::runtime_error(msg.str());
        }
        result.trajectory.row(t + 1) = y.transpose();
        result.norm_trace[t] = (y - spec.fixed_point).norm();
        result.disturbance_norms[t] = d.norm();
    }
    return result;
}

}  // namespace noregret
