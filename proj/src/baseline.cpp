#include "marx/baseline.hpp"

#include "marx/errors.hpp"

namespace marx {

namespace {

Eigen::VectorXd rollout_means(const MarxBeliefs& b, const Buffers& buf,
                              const Eigen::VectorXd& stacked, int horizon) {
    const Eigen::Index du = b.dims().D_u;
    const Eigen::Index dy = b.dims().D_y;
    const Eigen::MatrixXd& M = b.posterior().M();
    Eigen::VectorXd means(dy * horizon);
    Buffers vbuf = buf;
    for (int t = 0; t < horizon; ++t) {
        const Eigen::VectorXd u = stacked.segment(t * du, du);
        const Eigen::VectorXd mu = M.transpose() * make_regressor(u, vbuf).x;
        means.segment(t * dy, dy) = mu;
        vbuf = push_buffers(vbuf, u, mu);
    }
    return means;
}

}  // namespace

double mpc_cost(const MarxBeliefs& b, const Buffers& buf, const std::vector<Eigen::VectorXd>& u_seq,
                const ControlPrior& cp, const Eigen::VectorXd& goal_mean) {
    if (u_seq.empty()) throw DimensionError("mpc_cost: empty control sequence");
    if (goal_mean.size() != b.dims().D_y) throw DimensionError("mpc_cost: goal dimension mismatch");
    if (cp.precision.size() != b.dims().D_u) throw DimensionError("mpc_cost: prior dimension mismatch");
    Buffers vbuf = buf;
    double cost = 0.0;
    for (const auto& u : u_seq) {
        const LocationScaleT pred = posterior_predictive(b, u, vbuf);
        cost += u.dot(cp.precision.matrix() * u) + (pred.mu() - goal_mean).squaredNorm();
        vbuf = push_buffers(vbuf, u, pred.mu());
    }
    return cost;
}

MpcObjective::MpcObjective(const MarxBeliefs& b, const Buffers& buf, const ControlPrior& cp,
                           const Eigen::VectorXd& goal_mean, int horizon)
    : D_u_(b.dims().D_u), horizon_(horizon), weight_(cp.precision.matrix()) {
    if (horizon < 1) throw DimensionError("MpcObjective: horizon must be at least 1");
    if (goal_mean.size() != b.dims().D_y) throw DimensionError("MpcObjective: goal dimension mismatch");
    if (cp.precision.size() != D_u_) throw DimensionError("MpcObjective: prior dimension mismatch");
    const Eigen::Index n = D_u_ * horizon;
    const Eigen::VectorXd base = rollout_means(b, buf, Eigen::VectorXd::Zero(n), horizon);
    jacobian_.resize(base.size(), n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[j] = 1.0;
        jacobian_.col(j) = rollout_means(b, buf, e, horizon) - base;
    }
    offset_ = base - goal_mean.replicate(horizon, 1);
}

double MpcObjective::operator()(const Eigen::VectorXd& stacked) const {
    double cost = (offset_ + jacobian_ * stacked).squaredNorm();
    for (int t = 0; t < horizon_; ++t) {
        const auto u = stacked.segment(t * D_u_, D_u_);
        cost += u.dot(weight_ * u);
    }
    return cost;
}

MpcChoice mpc_select(const MarxBeliefs& b, const Buffers& buf, const ControlPrior& cp,
                     const ControlBox& box, const Eigen::VectorXd& goal_mean, int horizon,
                     const OptimizerOptions& options,
                     const std::vector<Eigen::VectorXd>& warm_start) {
    if (box.dim() != b.dims().D_u) throw DimensionError("mpc_select: box dimension mismatch");
    const MpcObjective J(b, buf, cp, goal_mean, horizon);
    const Eigen::VectorXd lo = box.lo().replicate(horizon, 1);
    const Eigen::VectorXd hi = box.hi().replicate(horizon, 1);

    std::vector<Eigen::VectorXd> extra;
    if (!warm_start.empty()) {
        if (static_cast<int>(warm_start.size()) != horizon)
            throw DimensionError("mpc_select: warm start length differs from horizon");
        Eigen::VectorXd s(lo.size());
        for (int t = 0; t < horizon; ++t) s.segment(t * box.dim(), box.dim()) = warm_start[t];
        extra.push_back(s);
    }
    const OptimizerResult r =
        minimize_in_box([&](const Eigen::VectorXd& x) { return J(x); }, lo, hi, options, extra);

    MpcChoice out;
    for (int t = 0; t < horizon; ++t) out.sequence.push_back(r.x.segment(t * box.dim(), box.dim()));
    out.u = out.sequence.front();
    out.objective = r.value;
    out.converged = r.converged;
    return out;
}

std::vector<Eigen::VectorXd> shift_sequence(const std::vector<Eigen::VectorXd>& seq) {
    if (seq.empty()) return seq;
    std::vector<Eigen::VectorXd> out(seq.begin() + 1, seq.end());
    out.push_back(seq.back());
    return out;
}

}  // namespace marx
