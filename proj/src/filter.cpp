#include "marx/filter.hpp"

#include <sstream>

#include "marx/errors.hpp"

namespace marx {

namespace {

void check_vector(const Eigen::VectorXd& v, Eigen::Index n, const char* what) {
    if (v.size() != n) {
        std::ostringstream os;
        os << what << ": expected length " << n << ", got " << v.size();
        throw DimensionError(os.str());
    }
}

double predictive_dof(const MarxBeliefs& b) {
    const double eta = b.posterior().nu() - static_cast<double>(b.dims().D_y) + 1.0;
    if (!(eta > 0.0)) throw DegreesOfFreedomError("posterior predictive: nu - D_y + 1 must be positive");
    return eta;
}

// Omega_k from the two residuals; the rank-one term is PSD in exact arithmetic.
SpdMatrix updated_scale(const Eigen::MatrixXd& omega) {
    try {
        return SpdMatrix(omega);
    } catch (const NotPositiveDefinite&) {
    }
    try {
        return SpdMatrix(omega + SpdMatrix::kMinEigenvalue *
                                     Eigen::MatrixXd::Identity(omega.rows(), omega.cols()));
    } catch (const NotPositiveDefinite& e) {
        throw NumericalBreakdown(std::string("update_beliefs: Omega lost positive definiteness (") +
                                 e.what() + ")");
    }
}

}  // namespace

Buffers::Buffers(const Dimensions& dims)
    : dims_(dims),
      u_hist_(static_cast<std::size_t>(dims.M_u), Eigen::VectorXd::Zero(dims.D_u)),
      y_hist_(static_cast<std::size_t>(dims.M_y), Eigen::VectorXd::Zero(dims.D_y)) {}

Buffers::Buffers(const Dimensions& dims, std::vector<Eigen::VectorXd> u_hist,
                 std::vector<Eigen::VectorXd> y_hist)
    : dims_(dims), u_hist_(std::move(u_hist)), y_hist_(std::move(y_hist)) {
    if (static_cast<Eigen::Index>(u_hist_.size()) != dims_.M_u ||
        static_cast<Eigen::Index>(y_hist_.size()) != dims_.M_y)
        throw DimensionError("Buffers: memory lengths must equal M_u and M_y");
    for (const auto& u : u_hist_) check_vector(u, dims_.D_u, "Buffers u_hist");
    for (const auto& y : y_hist_) check_vector(y, dims_.D_y, "Buffers y_hist");
}

MarxBeliefs::MarxBeliefs(MatrixNormalWishart posterior, const Dimensions& dims)
    : posterior_(std::move(posterior)), dims_(dims) {
    if (posterior_.dim_x() != dims_.dim_x() || posterior_.dim_y() != dims_.D_y)
        throw DimensionError("MarxBeliefs: posterior shape does not match dimensions");
}

MarxBeliefs MarxBeliefs::prior(const Dimensions& dims, double nu0, double m0_scale,
                               double lambda0_scale, double omega0_scale) {
    const Eigen::Index dx = dims.dim_x();
    const Eigen::Index dy = dims.D_y;
    return MarxBeliefs(MatrixNormalWishart(m0_scale * Eigen::MatrixXd::Identity(dx, dy),
                                           SpdMatrix::identity(dx, lambda0_scale),
                                           SpdMatrix::identity(dy, omega0_scale), nu0),
                       dims);
}

RegressorVector make_regressor(const Eigen::VectorXd& u, const Buffers& buf) {
    const Dimensions& d = buf.dims();
    check_vector(u, d.D_u, "make_regressor control");
    RegressorVector r{Eigen::VectorXd(d.dim_x())};
    Eigen::Index at = 0;
    r.x.segment(at, d.D_u) = u;
    at += d.D_u;
    for (const auto& past : buf.u_hist()) {
        r.x.segment(at, d.D_u) = past;
        at += d.D_u;
    }
    for (const auto& past : buf.y_hist()) {
        r.x.segment(at, d.D_y) = past;
        at += d.D_y;
    }
    return r;
}

ImproperLikelihoodMessage likelihood_message(const RegressorVector& x, const Eigen::VectorXd& y) {
    const double dx = static_cast<double>(x.x.size());
    const double dy = static_cast<double>(y.size());
    ImproperLikelihoodMessage msg;
    msg.nu_bar = 2.0 - dx + dy;
    msg.Lambda_bar = x.x * x.x.transpose();
    // Minimum-norm solution of (x x^T) M = x y^T, i.e. x y^T / |x|^2.
    const double n2 = x.x.squaredNorm();
    msg.M_bar = n2 > 0.0 ? Eigen::MatrixXd(x.x * y.transpose() / n2)
                         : Eigen::MatrixXd::Zero(x.x.size(), y.size());
    msg.Omega_bar = Eigen::MatrixXd::Zero(y.size(), y.size());
    return msg;
}

MarxBeliefs update_beliefs(const MarxBeliefs& b, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& y, const Buffers& buf) {
    if (!(buf.dims() == b.dims())) throw DimensionError("update_beliefs: buffer dimensions differ");
    check_vector(y, b.dims().D_y, "update_beliefs output");
    const RegressorVector reg = make_regressor(u, buf);
    const ImproperLikelihoodMessage msg = likelihood_message(reg, y);
    const MatrixNormalWishart& prior = b.posterior();
    const Eigen::VectorXd& x = reg.x;

    // Product of prior and likelihood message at the equality node.
    const double nu = prior.nu() + msg.nu_bar + static_cast<double>(x.size()) -
                      static_cast<double>(y.size()) - 1.0;
    SpdMatrix Lambda(prior.Lambda().matrix() + msg.Lambda_bar);

    // M_k = Lambda_k^{-1}(Lambda_{k-1} M_{k-1} + x y^T), written as a correction of M_{k-1}
    const Eigen::VectorXd e_prior = y - prior.M().transpose() * x;
    const Eigen::MatrixXd M = prior.M() + Lambda.solve(x) * e_prior.transpose();
    const Eigen::VectorXd e_post = y - M.transpose() * x;
    const Eigen::MatrixXd outer = e_post * e_prior.transpose();
    SpdMatrix Omega = updated_scale(prior.Omega().matrix() + 0.5 * (outer + outer.transpose()));

    return MarxBeliefs(MatrixNormalWishart(M, std::move(Lambda), std::move(Omega), nu), b.dims());
}

Buffers push_buffers(const Buffers& buf, const Eigen::VectorXd& u, const Eigen::VectorXd& y) {
    const Dimensions& d = buf.dims();
    check_vector(u, d.D_u, "push_buffers control");
    check_vector(y, d.D_y, "push_buffers output");
    Buffers out = buf;
    if (!out.u_hist_.empty()) {
        out.u_hist_.pop_back();
        out.u_hist_.insert(out.u_hist_.begin(), u);
    }
    if (!out.y_hist_.empty()) {
        out.y_hist_.pop_back();
        out.y_hist_.insert(out.y_hist_.begin(), y);
    }
    return out;
}

LocationScaleT posterior_predictive(const MarxBeliefs& b, const Eigen::VectorXd& u,
                                    const Buffers& buf) {
    if (!(buf.dims() == b.dims()))
        throw DimensionError("posterior_predictive: buffer dimensions differ");
    const double eta = predictive_dof(b);
    const RegressorVector reg = make_regressor(u, buf);
    const MatrixNormalWishart& post = b.posterior();
    const double scale = 1.0 + post.Lambda().inv_quad(reg.x);
    return LocationScaleT(eta, post.M().transpose() * reg.x,
                          SpdMatrix(post.Omega().matrix() * (scale / eta)));
}

double negative_log_evidence(const MarxBeliefs& b, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& y, const Buffers& buf) {
    return -t_log_pdf(posterior_predictive(b, u, buf), y);
}

PredictiveSlice::PredictiveSlice(const MarxBeliefs& b, const RegressorVector& base,
                                 Eigen::Index offset, Eigen::Index length)
    : eta_(predictive_dof(b)), Omega_(b.posterior().Omega()) {
    const MatrixNormalWishart& post = b.posterior();
    if (base.x.size() != post.dim_x() || offset < 0 || length < 0 ||
        offset + length > base.x.size())
        throw DimensionError("PredictiveSlice: block outside the regressor");
    Eigen::VectorXd base0 = base.x;
    base0.segment(offset, length).setZero();
    const Eigen::MatrixXd P = post.Lambda().inverse();
    const Eigen::VectorXd Pb = P * base0;
    G_ = post.M().middleRows(offset, length);
    mean0_ = post.M().transpose() * base0;
    c_ = 1.0 + base0.dot(Pb);
    p_ = Pb.segment(offset, length);
    K_ = P.block(offset, offset, length, length);
}

}  // namespace marx
