#pragma once

#include <iosfwd>
#include <vector>

#include "noregret/common.hpp"
#include "noregret/geometry.hpp"

namespace noregret {

// Online convex programming via Greedy Projection: gradient step with step
// size eta_t = eta0 / sqrt(t), then Euclidean projection back onto the
// feasible set.

struct OcpState {
    VectorXd action;          // a_t
    Index stage = 1;          // t, 1-based
    double step_scale = 1.0;  // eta0
    FeasibleSetXd feasible_set = FeasibleSetXd::box(VectorXd::Constant(1, -1.0),
                                                    VectorXd::Constant(1, 1.0));
};

OcpState make_ocp_state(VectorXd initial_action, const FeasibleSetXd& set, double eta0);

OcpState gp_step(const OcpState& state, const Eigen::Ref<const VectorXd>& gradient);

// Realized history of a quadratic-loss stream: stage t played `action` against
// the loss a -> (<a, phi_t> - y_t)^2 and paid `loss`. Storing (phi, y) instead
// of loss closures keeps the ledger serializable and lets any candidate action
// be re-scored after the fact.
class RegretLedger {
  public:
    void append(double loss, VectorXd features, double target, VectorXd action);

    Index size() const { return static_cast<Index>(losses_.size()); }
    Index action_dimension() const;

    const std::vector<double>& losses() const { return losses_; }
    const std::vector<VectorXd>& features() const { return features_; }
    const std::vector<double>& targets() const { return targets_; }
    const std::vector<VectorXd>& actions() const { return actions_; }

    // Loss of `candidate` at stage t (1-based).
    double stage_loss_at(Index stage, const Eigen::Ref<const VectorXd>& candidate) const;

  private:
    std::vector<double> losses_;
    std::vector<VectorXd> features_;
    std::vector<double> targets_;
    std::vector<VectorXd> actions_;
};

// R(T) against a fixed candidate: sum of realized losses minus the candidate's
// cumulative loss over the same stream. Empty ledger gives 0.
double external_regret(const RegretLedger& ledger, const Eigen::Ref<const VectorXd>& candidate);

struct BestFixedAction {
    VectorXd action;
    bool degenerate = false;  // cumulative quadratic was rank-deficient
};

// argmin over the set of the cumulative quadratic: min-norm least squares,
// projected when the unconstrained minimizer is infeasible.
BestFixedAction best_fixed_action(const RegretLedger& ledger, const FeasibleSetXd& set);

// Entry T-1 is max(0, R(T) against the prefix-best fixed action) / T.
SequenceTrace average_regret_curve(const RegretLedger& ledger, const FeasibleSetXd& set);

// CSV columns: stage, loss, action components. 17 significant digits.
void write_ledger_csv(const RegretLedger& ledger, std::ostream& out);

}  // namespace noregret
