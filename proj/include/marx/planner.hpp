#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "marx/distributions.hpp"
#include "marx/filter.hpp"
#include "marx/optimize.hpp"

namespace marx {

/// Gaussian prior over a future output: the final goal (m*, S*) or a
/// Laplace-derived intermediate goal (m_t, S_t).
using GoalPrior = Gaussian;

/// Zero-mean Gaussian control prior N(0, precision^{-1}).
struct ControlPrior {
    SpdMatrix precision;

    double penalty(const Eigen::VectorXd& u) const { return 0.5 * u.dot(precision.matrix() * u); }
};

/// Per-coordinate control bounds lo <= u <= hi.
class ControlBox {
public:
    ControlBox(Eigen::VectorXd lo, Eigen::VectorXd hi);

    static ControlBox symmetric(Eigen::Index dim, double bound) {
        return ControlBox(Eigen::VectorXd::Constant(dim, -bound), Eigen::VectorXd::Constant(dim, bound));
    }

    Eigen::Index dim() const { return lo_.size(); }
    const Eigen::VectorXd& lo() const { return lo_; }
    const Eigen::VectorXd& hi() const { return hi_; }
    bool contains(const Eigen::VectorXd& u, double tol = 0.0) const;

private:
    Eigen::VectorXd lo_;
    Eigen::VectorXd hi_;
};

struct PlannerOptions {
    OptimizerOptions optimizer;
    /// Backward/forward sweeps after the initial forward pass.
    int sweeps = 1;
};

/// Expected free energy of control u against `goal`, additive constants dropped:
///   G(u) = -1/2 ln|Sigma(u)| + 1/2 Tr[S^{-1}(Sigma(u) eta/(eta-2) + Xi(u))]
double efe(const MarxBeliefs& b, const Buffers& buf, const Eigen::VectorXd& u,
           const GoalPrior& goal);

/// Free energy with the predictive entropy in place of the mutual information:
/// -H[p(y|u)] + E_p[-ln N(y | m*, S*)]. Differs from efe() by a u-independent constant.
double standard_fe(const MarxBeliefs& b, const Buffers& buf, const Eigen::VectorXd& u,
                   const GoalPrior& goal);

/// efe() specialised to fixed beliefs, buffers and goal. Each evaluation is a
/// handful of small dense products.
class EfeObjective {
public:
    EfeObjective(const MarxBeliefs& b, const Buffers& buf, const GoalPrior& goal);

    double operator()(const Eigen::VectorXd& u) const;

private:
    PredictiveSlice slice_;
    Eigen::VectorXd goal_mean_;
    Eigen::LLT<Eigen::MatrixXd> goal_llt_;
    double dim_y_;
    double trace_ratio_;  // Tr[S^{-1} Omega] * eta/(eta-2) / eta
    double log_det_omega_;
};

struct ControlChoice {
    Eigen::VectorXd u;
    /// 1/2 u^T Upsilon u + G(u) at u.
    double objective = 0.0;
    /// false when the optimizer stopped on its budget.
    bool converged = false;
};

/// argmin over the box of 1/2 u^T Upsilon u + efe(u).
ControlChoice select_control(const MarxBeliefs& b, const Buffers& buf, const GoalPrior& goal,
                             const ControlPrior& cp, const ControlBox& box,
                             const OptimizerOptions& options = {});

/// Predictive over y_t for an already selected control; passed forward along the horizon.
LocationScaleT forward_message(const MarxBeliefs& b, const Buffers& buf, const Eigen::VectorXd& u);

/// Log-density of the form
///   f(v) = const - a ln s(v) - b ln(1 + Q(v)/s(v))
///   s(v) = c + 2 p^T v + v^T K v,  Q(v) = q0 - 2 h^T v + v^T L v
/// with analytic gradient and Hessian. Both the Student-t forward message and
/// the backward message have this shape in y_t.
class StudentLogTerm {
public:
    StudentLogTerm(double log_const, double a, double b, double c, Eigen::VectorXd p,
                   Eigen::MatrixXd K, double q0, Eigen::VectorXd h, Eigen::MatrixXd L);

    /// ln T_eta(y | mu, Sigma) as a function of y.
    static StudentLogTerm from_t(const LocationScaleT& d);
    /// A constant function of y.
    static StudentLogTerm flat(Eigen::Index dim, double value = 0.0);

    Eigen::Index dim() const { return p_.size(); }
    double value(const Eigen::VectorXd& v) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& v) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& v) const;
    /// argmin of Q(v) when L is positive definite.
    std::optional<Eigen::VectorXd> residual_minimizer() const;

private:
    double log_const_, a_, b_, c_;
    Eigen::VectorXd p_;
    Eigen::MatrixXd K_;
    double q0_;
    Eigen::VectorXd h_;
    Eigen::MatrixXd L_;
};

/// Backward message into y_t from the node at t+1:
///   y_t -> ln T_{eta_bar}(m_{t+1} | mu_bar(y_t), Sigma_bar(y_t))
/// where the regressor of step t+1 is [u_{t+1}; u_bar_{t+1}; y_t; y_hat_{t-1}...]
/// and y_t occupies output-memory slot `hole_slot`.
class BackwardMessage {
public:
    explicit BackwardMessage(StudentLogTerm term) : term_(std::move(term)) {}

    double operator()(const Eigen::VectorXd& y) const { return term_.value(y); }
    const StudentLogTerm& term() const { return term_; }
    Eigen::Index dim() const { return term_.dim(); }

private:
    StudentLogTerm term_;
};

/// `buf_next` holds the memories of step t+1; the entry at y_hist()[hole_slot] is
/// the free variable and its stored value is ignored.
BackwardMessage backward_message(const MarxBeliefs& b, const Eigen::VectorXd& future_mean,
                                 const Eigen::VectorXd& u_next, const Buffers& buf_next,
                                 Eigen::Index hole_slot = 0);

struct LaplaceResult {
    GoalPrior goal;
    /// Hessian at the optimum was not negative definite; the goal is the
    /// moment-matched forward message instead.
    bool used_fallback = false;
};

/// Gaussian approximation N(m_t, S_t) of fwd(y) * exp(bwd(y)) at its mode.
LaplaceResult laplace_goal(const LocationScaleT& fwd, const BackwardMessage& bwd);

struct Plan {
    std::vector<Eigen::VectorXd> controls;
    std::vector<GoalPrior> intermediate_goals;
    std::vector<LocationScaleT> predicted;
    std::vector<double> efe_values;
    int optimizer_warnings = 0;
    int laplace_fallbacks = 0;
};

/// H-step plan: forward passes select controls against per-step goals, backward
/// passes replace goals t..t+H-2 by Laplace approximations. Only
/// controls[0] is meant to be executed.
Plan plan(const MarxBeliefs& b, const Buffers& buf, const GoalPrior& final_goal,
          const ControlPrior& cp, const ControlBox& box, int horizon,
          const PlannerOptions& options = {});

}  // namespace marx
