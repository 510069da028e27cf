#include "noregret/ocp.hpp"

#include <cmath>
#include <ostream>

#include "noregret/io.hpp"

namespace noregret {

OcpState make_ocp_state(VectorXd initial_action, const FeasibleSetXd& set, double eta0) {
    require(eta0 >= 0.0 && std::isfinite(eta0), "make_ocp_state: eta0 must be finite and >= 0");
    require(contains(set, initial_action, 1e-9), "make_ocp_state: initial action infeasible");
    return OcpState{std::move(initial_action), 1, eta0, set};
}

OcpState gp_step(const OcpState& state, const Eigen::Ref<const VectorXd>& gradient) {
    require(gradient.size() == state.action.size(),
            "gp_step: gradient dimension != action dimension");
    require_finite(gradient, "gp_step gradient");
    const double eta = state.step_scale / std::sqrt(static_cast<double>(state.stage));
    OcpState next = state;
    next.action = project(state.feasible_set, state.action - eta * gradient);
    next.stage = state.stage + 1;
    return next;
}

void RegretLedger::append(double loss, VectorXd features, double target, VectorXd action) {
    require(std::isfinite(loss) && loss >= 0.0, "RegretLedger: stage loss must be nonnegative");
    require_finite(features, "RegretLedger features");
    require_finite(target, "RegretLedger target");
    require_finite(action, "RegretLedger action");
    if (!features_.empty()) {
        require(features.size() == features_.front().size(),
                "RegretLedger: feature dimension changed between stages");
    }
    losses_.push_back(loss);
    features_.push_back(std::move(features));
    targets_.push_back(target);
    actions_.push_back(std::move(action));
}

Index RegretLedger::action_dimension() const {
    return features_.empty() ? 0 : features_.front().size();
}

double RegretLedger::stage_loss_at(Index stage, const Eigen::Ref<const VectorXd>& candidate) const {
    const double residual = features_[stage - 1].dot(candidate) - targets_[stage - 1];
    return residual * residual;
}

double external_regret(const RegretLedger& ledger, const Eigen::Ref<const VectorXd>& candidate) {
    if (ledger.size() == 0) {
        return 0.0;
    }
    require(candidate.size() == ledger.action_dimension(),
            "external_regret: candidate dimension != ledger feature dimension");
    KahanSum realized;
    KahanSum counterfactual;
    for (Index t = 1; t <= ledger.size(); ++t) {
        realized.add(ledger.losses()[t - 1]);
        counterfactual.add(ledger.stage_loss_at(t, candidate));
    }
    return realized.value() - counterfactual.value();
}

namespace {

// Minimizer of theta' A theta - 2 b' theta over the set. Min-norm on the
// unconstrained problem (rank-revealing COD), projected if infeasible.
BestFixedAction solve_cumulative_quadratic(const MatrixXd& gram, const VectorXd& moment,
                                           const FeasibleSetXd& set) {
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(gram);
    BestFixedAction result;
    result.degenerate = cod.rank() < gram.rows();
    result.action = cod.solve(moment);
    if (!contains(set, result.action, 0.0)) {
        result.action = project(set, result.action);
    }
    return result;
}

}  // namespace

BestFixedAction best_fixed_action(const RegretLedger& ledger, const FeasibleSetXd& set) {
    require(ledger.size() > 0, "best_fixed_action: empty ledger");
    const Index m = ledger.action_dimension();
    require(set.dimension() == m, "best_fixed_action: set dimension != feature dimension");
    MatrixXd gram = MatrixXd::Zero(m, m);
    VectorXd moment = VectorXd::Zero(m);
    for (Index t = 1; t <= ledger.size(); ++t) {
        const VectorXd& phi = ledger.features()[t - 1];
        gram.selfadjointView<Eigen::Lower>().rankUpdate(phi);
        moment += ledger.targets()[t - 1] * phi;
    }
    const MatrixXd full_gram = gram.selfadjointView<Eigen::Lower>();
    return solve_cumulative_quadratic(full_gram, moment, set);
}

SequenceTrace average_regret_curve(const RegretLedger& ledger, const FeasibleSetXd& set) {
    require(ledger.size() > 0, "average_regret_curve: empty ledger");
    const Index m = ledger.action_dimension();
    require(set.dimension() == m, "average_regret_curve: set dimension != feature dimension");
    SequenceTrace curve(ledger.size());
    MatrixXd gram = MatrixXd::Zero(m, m);
    VectorXd moment = VectorXd::Zero(m);
    KahanSum realized;
    KahanSum squared_targets;
    for (Index t = 1; t <= ledger.size(); ++t) {
        const VectorXd& phi = ledger.features()[t - 1];
        const double y = ledger.targets()[t - 1];
        gram.selfadjointView<Eigen::Lower>().rankUpdate(phi);
        moment += y * phi;
        realized.add(ledger.losses()[t - 1]);
        squared_targets.add(y * y);
        const MatrixXd full_gram = gram.selfadjointView<Eigen::Lower>();
        const VectorXd best = solve_cumulative_quadratic(full_gram, moment, set).action;
        // Candidate's cumulative loss expands to theta'A theta - 2 b'theta + sum y^2.
        const double best_cost =
            best.dot(full_gram * best) - 2.0 * moment.dot(best) + squared_targets.value();
        const double regret = realized.value() - best_cost;
        curve[t - 1] = std::max(0.0, regret) / static_cast<double>(t);
    }
    return curve;
}

void write_ledger_csv(const RegretLedger& ledger, std::ostream& out) {
    out << "stage,loss";
    const Index m = ledger.action_dimension();
    for (Index j = 0; j < m; ++j) {
        out << ",action" << j + 1;
    }
    out << "\n";
    for (Index t = 1; t <= ledger.size(); ++t) {
        out << t << ',' << format_g17(ledger.losses()[t - 1]);
        for (Index j = 0; j < m; ++j) {
            out << ',' << format_g17(ledger.actions()[t - 1][j]);
        }
        out << "\n";
    }
}

}  // namespace noregret
