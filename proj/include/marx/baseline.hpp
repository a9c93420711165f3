#pragma once

#include <Eigen/Core>
#include <vector>

#include "marx/filter.hpp"
#include "marx/optimize.hpp"
#include "marx/planner.hpp"

namespace marx {

/// sum_t u_t^T Upsilon u_t + |mu_t(u_t) - m*|^2, with predicted means fed back
/// into the output memory as pseudo-observations.
double mpc_cost(const MarxBeliefs& b, const Buffers& buf, const std::vector<Eigen::VectorXd>& u_seq,
                const ControlPrior& cp, const Eigen::VectorXd& goal_mean);

/// mpc_cost() for fixed beliefs, buffers and goal, as a function of the
/// stacked sequence [u_1; ...; u_H]. The predicted means are affine in the
/// stacked controls, so they are tabulated once.
class MpcObjective {
public:
    MpcObjective(const MarxBeliefs& b, const Buffers& buf, const ControlPrior& cp,
                 const Eigen::VectorXd& goal_mean, int horizon);

    double operator()(const Eigen::VectorXd& stacked) const;

private:
    Eigen::Index D_u_;
    int horizon_;
    Eigen::MatrixXd weight_;
    Eigen::VectorXd offset_;   // stacked means at zero control, minus stacked goal
    Eigen::MatrixXd jacobian_; // d(stacked means)/d(stacked controls)
};

struct MpcChoice {
    Eigen::VectorXd u;
    std::vector<Eigen::VectorXd> sequence;
    double objective = 0.0;
    bool converged = false;
};

/// Minimizes mpc_cost over box^H; `warm_start`, when given, is used as an extra start.
MpcChoice mpc_select(const MarxBeliefs& b, const Buffers& buf, const ControlPrior& cp,
                     const ControlBox& box, const Eigen::VectorXd& goal_mean, int horizon,
                     const OptimizerOptions& options = {},
                     const std::vector<Eigen::VectorXd>& warm_start = {});

/// Drops the first control and repeats the last one.
std::vector<Eigen::VectorXd> shift_sequence(const std::vector<Eigen::VectorXd>& seq);

}  // namespace marx
