#include "marx/planner.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "marx/errors.hpp"

namespace marx {

namespace {

void require_second_moment(double eta) {
    if (!(eta > 2.0))
        throw DegreesOfFreedomError("expected free energy needs predictive eta > 2");
}

double student_log_const(double eta, double dim) {
    return std::lgamma(0.5 * (eta + dim)) - std::lgamma(0.5 * eta) -
           0.5 * dim * std::log(eta * std::numbers::pi);
}

}  // namespace

ControlBox::ControlBox(Eigen::VectorXd lo, Eigen::VectorXd hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size() || lo_.size() == 0)
        throw DimensionError("ControlBox: bound size mismatch");
    if (!(lo_.array() < hi_.array()).all())
        throw DimensionError("ControlBox: lower bounds must be strictly below upper bounds");
}

bool ControlBox::contains(const Eigen::VectorXd& u, double tol) const {
    return u.size() == dim() && (u.array() >= lo_.array() - tol).all() &&
           (u.array() <= hi_.array() + tol).all();
}

double efe(const MarxBeliefs& b, const Buffers& buf, const Eigen::VectorXd& u,
           const GoalPrior& goal) {
    const LocationScaleT pred = posterior_predictive(b, u, buf);
    require_second_moment(pred.eta());
    if (goal.dim() != pred.dim()) throw DimensionError("efe: goal dimension mismatch");
    const Eigen::VectorXd r = pred.mu() - goal.mean();
    const Eigen::MatrixXd second = pred.covariance() + r * r.transpose();
    return -0.5 * pred.Sigma().log_det() + 0.5 * goal.covariance().solve(second).trace();
}

double standard_fe(const MarxBeliefs& b, const Buffers& buf, const Eigen::VectorXd& u,
                   const GoalPrior& goal) {
    const LocationScaleT pred = posterior_predictive(b, u, buf);
    require_second_moment(pred.eta());
    return -t_entropy(pred) + gaussian_cross_entropy_from_t(pred, goal);
}

EfeObjective::EfeObjective(const MarxBeliefs& b, const Buffers& buf, const GoalPrior& goal)
    : slice_(b, make_regressor(Eigen::VectorXd::Zero(b.dims().D_u), buf), 0, b.dims().D_u),
      goal_mean_(goal.mean()),
      goal_llt_(goal.covariance().llt()),
      dim_y_(static_cast<double>(b.dims().D_y)) {
    require_second_moment(slice_.eta());
    if (goal.dim() != b.dims().D_y) throw DimensionError("EfeObjective: goal dimension mismatch");
    trace_ratio_ = goal.covariance().solve(slice_.Omega().matrix()).trace() / (slice_.eta() - 2.0);
    log_det_omega_ = slice_.Omega().log_det();
}

double EfeObjective::operator()(const Eigen::VectorXd& u) const {
    const double s = slice_.scale(u);
    const Eigen::VectorXd r = slice_.mean(u) - goal_mean_;
    const double xi = goal_llt_.matrixL().solve(r).squaredNorm();
    const double log_det_sigma = dim_y_ * std::log(s / slice_.eta()) + log_det_omega_;
    return -0.5 * log_det_sigma + 0.5 * (s * trace_ratio_ + xi);
}

ControlChoice select_control(const MarxBeliefs& b, const Buffers& buf, const GoalPrior& goal,
                             const ControlPrior& cp, const ControlBox& box,
                             const OptimizerOptions& options) {
    if (box.dim() != b.dims().D_u || cp.precision.size() != b.dims().D_u)
        throw DimensionError("select_control: control dimension mismatch");
    const EfeObjective G(b, buf, goal);
    const Objective J = [&](const Eigen::VectorXd& u) { return cp.penalty(u) + G(u); };
    const OptimizerResult r = minimize_in_box(J, box.lo(), box.hi(), options);
    return ControlChoice{r.x, r.value, r.converged};
}

LocationScaleT forward_message(const MarxBeliefs& b, const Buffers& buf, const Eigen::VectorXd& u) {
    return posterior_predictive(b, u, buf);
}

StudentLogTerm::StudentLogTerm(double log_const, double a, double b, double c, Eigen::VectorXd p,
                               Eigen::MatrixXd K, double q0, Eigen::VectorXd h, Eigen::MatrixXd L)
    : log_const_(log_const), a_(a), b_(b), c_(c), p_(std::move(p)), K_(std::move(K)), q0_(q0),
      h_(std::move(h)), L_(std::move(L)) {
    const Eigen::Index n = p_.size();
    if (K_.rows() != n || K_.cols() != n || h_.size() != n || L_.rows() != n || L_.cols() != n)
        throw DimensionError("StudentLogTerm: inconsistent shapes");
}

StudentLogTerm StudentLogTerm::from_t(const LocationScaleT& d) {
    const Eigen::Index n = d.dim();
    const double eta = d.eta();
    const Eigen::MatrixXd P = d.Sigma().inverse();
    const Eigen::VectorXd Pmu = P * d.mu();
    return StudentLogTerm(student_log_const(eta, static_cast<double>(n)) - 0.5 * d.Sigma().log_det(),
                          0.0, 0.5 * (eta + static_cast<double>(n)), 1.0, Eigen::VectorXd::Zero(n),
                          Eigen::MatrixXd::Zero(n, n), d.mu().dot(Pmu) / eta, Pmu / eta, P / eta);
}

StudentLogTerm StudentLogTerm::flat(Eigen::Index dim, double value) {
    return StudentLogTerm(value, 0.0, 0.0, 1.0, Eigen::VectorXd::Zero(dim),
                          Eigen::MatrixXd::Zero(dim, dim), 0.0, Eigen::VectorXd::Zero(dim),
                          Eigen::MatrixXd::Zero(dim, dim));
}

std::optional<Eigen::VectorXd> StudentLogTerm::residual_minimizer() const {
    Eigen::LLT<Eigen::MatrixXd> llt(L_);
    if (L_.size() == 0 || llt.info() != Eigen::Success) return std::nullopt;
    Eigen::VectorXd v = llt.solve(h_);
    if (!v.allFinite()) return std::nullopt;
    return v;
}

double StudentLogTerm::value(const Eigen::VectorXd& v) const {
    const double s = c_ + 2.0 * p_.dot(v) + v.dot(K_ * v);
    const double Q = q0_ - 2.0 * h_.dot(v) + v.dot(L_ * v);
    double out = log_const_;
    if (a_ != 0.0) out -= a_ * std::log(s);
    if (b_ != 0.0) out -= b_ * std::log1p(Q / s);
    return out;
}

Eigen::VectorXd StudentLogTerm::gradient(const Eigen::VectorXd& v) const {
    const double s = c_ + 2.0 * p_.dot(v) + v.dot(K_ * v);
    const double Q = q0_ - 2.0 * h_.dot(v) + v.dot(L_ * v);
    const Eigen::VectorXd gs = 2.0 * (p_ + K_ * v);
    const Eigen::VectorXd gQ = 2.0 * (L_ * v - h_);
    const Eigen::VectorXd gv = gQ / s - (Q / (s * s)) * gs;
    return -a_ * gs / s - b_ * gv / (1.0 + Q / s);
}

Eigen::MatrixXd StudentLogTerm::hessian(const Eigen::VectorXd& v) const {
    const double s = c_ + 2.0 * p_.dot(v) + v.dot(K_ * v);
    const double Q = q0_ - 2.0 * h_.dot(v) + v.dot(L_ * v);
    const double ratio = Q / s;
    const Eigen::VectorXd gs = 2.0 * (p_ + K_ * v);
    const Eigen::VectorXd gQ = 2.0 * (L_ * v - h_);
    const Eigen::MatrixXd Hs = 2.0 * K_;
    const Eigen::MatrixXd HQ = 2.0 * L_;
    const Eigen::VectorXd gv = gQ / s - (Q / (s * s)) * gs;
    const Eigen::MatrixXd Hv = HQ / s - (gQ * gs.transpose() + gs * gQ.transpose()) / (s * s) -
                               (Q / (s * s)) * Hs + (2.0 * Q / (s * s * s)) * gs * gs.transpose();
    const Eigen::MatrixXd Hlog_s = Hs / s - gs * gs.transpose() / (s * s);
    const Eigen::MatrixXd Hlog_v = Hv / (1.0 + ratio) - gv * gv.transpose() / ((1.0 + ratio) * (1.0 + ratio));
    return -a_ * Hlog_s - b_ * Hlog_v;
}

BackwardMessage backward_message(const MarxBeliefs& b, const Eigen::VectorXd& future_mean,
                                 const Eigen::VectorXd& u_next, const Buffers& buf_next,
                                 Eigen::Index hole_slot) {
    const Dimensions& d = b.dims();
    if (!(buf_next.dims() == d)) throw DimensionError("backward_message: buffer dimensions differ");
    if (hole_slot < 0 || hole_slot >= d.M_y)
        throw DimensionError("backward_message: hole slot outside the output memory");
    if (future_mean.size() != d.D_y) throw DimensionError("backward_message: future mean size");

    const RegressorVector base = make_regressor(u_next, buf_next);
    const PredictiveSlice slice(b, base, d.output_offset() + hole_slot * d.D_y, d.D_y);
    const double eta = slice.eta();
    const double n = static_cast<double>(d.D_y);
    const Eigen::MatrixXd Oinv = slice.Omega().inverse();
    const Eigen::VectorXd d0 = future_mean - slice.mean0();
    const Eigen::VectorXd Od0 = Oinv * d0;
    const double log_const =
        student_log_const(eta, n) - 0.5 * slice.Omega().log_det() + 0.5 * n * std::log(eta);
    return BackwardMessage(StudentLogTerm(log_const, 0.5 * n, 0.5 * (eta + n), slice.c(), slice.p(),
                                          slice.K(), d0.dot(Od0), slice.G() * Od0,
                                          slice.G() * Oinv * slice.G().transpose()));
}

namespace {

struct ModeSearch {
    Eigen::VectorXd y;
    double value;
};

// Damped Newton ascent on fwd + bwd.
ModeSearch newton_ascent(const StudentLogTerm& fwd, const StudentLogTerm& bwd, Eigen::VectorXd y) {
    const Eigen::Index n = y.size();
    auto F = [&](const Eigen::VectorXd& v) { return fwd.value(v) + bwd.value(v); };
    double fy = F(y);
    for (int iter = 0; iter < 200; ++iter) {
        const Eigen::VectorXd g = fwd.gradient(y) + bwd.gradient(y);
        const Eigen::MatrixXd negH = -(fwd.hessian(y) + bwd.hessian(y));
        Eigen::VectorXd d;
        double damping = 0.0;
        const double diag_scale = std::max(negH.diagonal().cwiseAbs().maxCoeff(), 1e-300);
        for (int attempt = 0; attempt < 60; ++attempt) {
            Eigen::LLT<Eigen::MatrixXd> llt(negH + damping * Eigen::MatrixXd::Identity(n, n));
            if (llt.info() == Eigen::Success) {
                d = llt.solve(g);
                if (d.allFinite() && g.dot(d) > 0.0) break;
            }
            damping = damping == 0.0 ? 1e-10 * diag_scale : damping * 10.0;
            d.resize(0);
        }
        if (d.size() == 0) d = g / diag_scale;
        const double slope = g.dot(d);
        if (!(slope > 1e-24 * (1.0 + std::abs(fy)))) break;
        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            const Eigen::VectorXd cand = y + alpha * d;
            const double fc = F(cand);
            if (std::isfinite(fc) && fc >= fy + 1e-4 * alpha * slope) {
                y = cand;
                fy = fc;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
        if ((alpha * d).lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + y.lpNorm<Eigen::Infinity>())) break;
    }
    return {y, fy};
}

}  // namespace

LaplaceResult laplace_goal(const LocationScaleT& fwd, const BackwardMessage& bwd) {
    if (bwd.dim() != fwd.dim()) throw DimensionError("laplace_goal: message dimensions differ");
    const StudentLogTerm fwd_term = StudentLogTerm::from_t(fwd);
    const StudentLogTerm& bwd_term = bwd.term();

    std::vector<Eigen::VectorXd> starts{fwd.mu()};
    // Point where the backward mean reproduces the pseudo-observation, when unique.
    if (const auto fit = bwd_term.residual_minimizer()) {
        starts.push_back(*fit);
        starts.push_back(0.5 * (*fit + fwd.mu()));
    }

    ModeSearch best{fwd.mu(), -std::numeric_limits<double>::infinity()};
    for (const auto& s : starts) {
        ModeSearch m = newton_ascent(fwd_term, bwd_term, s);
        if (m.value > best.value) best = std::move(m);
    }

    const Eigen::MatrixXd negH = -(fwd_term.hessian(best.y) + bwd_term.hessian(best.y));
    try {
        const SpdMatrix precision(negH);
        return LaplaceResult{GoalPrior(best.y, SpdMatrix(precision.inverse())), false};
    } catch (const NotPositiveDefinite&) {
        return LaplaceResult{GoalPrior(fwd.mu(), SpdMatrix(fwd.covariance())), true};
    }
}

Plan plan(const MarxBeliefs& b, const Buffers& buf, const GoalPrior& final_goal,
          const ControlPrior& cp, const ControlBox& box, int horizon,
          const PlannerOptions& options) {
    if (horizon < 1) throw DimensionError("plan: horizon must be at least 1");
    const auto H = static_cast<std::size_t>(horizon);
    const Dimensions& d = b.dims();

    Plan out;
    out.intermediate_goals.assign(H, final_goal);
    std::vector<Buffers> node_buffers(H, buf);

    auto forward_pass = [&] {
        out.controls.clear();
        out.predicted.clear();
        out.efe_values.clear();
        Buffers vbuf = buf;
        for (std::size_t i = 0; i < H; ++i) {
            node_buffers[i] = vbuf;
            const ControlChoice c =
                select_control(b, vbuf, out.intermediate_goals[i], cp, box, options.optimizer);
            if (!c.converged) ++out.optimizer_warnings;
            if (!box.contains(c.u)) throw Error("plan: optimizer returned a control outside the box");
            out.controls.push_back(c.u);
            out.efe_values.push_back(c.objective - cp.penalty(c.u));
            out.predicted.push_back(forward_message(b, vbuf, c.u));
            vbuf = push_buffers(vbuf, c.u, out.predicted.back().mu());
        }
    };

    auto backward_pass = [&] {
        for (std::size_t i = H - 1; i-- > 0;) {
            const BackwardMessage bwd =
                d.M_y > 0 ? backward_message(b, out.intermediate_goals[i + 1].mean(),
                                             out.controls[i + 1], node_buffers[i + 1], 0)
                          : BackwardMessage(StudentLogTerm::flat(d.D_y));
            LaplaceResult lr = laplace_goal(out.predicted[i], bwd);
            if (lr.used_fallback) ++out.laplace_fallbacks;
            out.intermediate_goals[i] = std::move(lr.goal);
        }
    };

    forward_pass();
    for (int s = 0; s < options.sweeps && H > 1; ++s) {
        backward_pass();
        forward_pass();
    }
    return out;
}

}  // namespace marx
