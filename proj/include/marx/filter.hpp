#pragma once

#include <Eigen/Core>
#include <vector>

#include "marx/distributions.hpp"

namespace marx {

/// Sizes of a MARX model: control and output dimensions and memory lengths.
struct Dimensions {
    Eigen::Index D_u = 2;
    Eigen::Index D_y = 2;
    Eigen::Index M_u = 2;
    Eigen::Index M_y = 2;

    /// D_x = D_u (M_u + 1) + D_y M_y
    Eigen::Index dim_x() const { return D_u * (M_u + 1) + D_y * M_y; }
    /// Offset of the output memory inside the regressor.
    Eigen::Index output_offset() const { return D_u * (M_u + 1); }

    bool operator==(const Dimensions&) const = default;
};

/// Sliding control/output memories, most recent entry first.
class Buffers {
public:
    /// All-zero memories.
    explicit Buffers(const Dimensions& dims);
    Buffers(const Dimensions& dims, std::vector<Eigen::VectorXd> u_hist,
            std::vector<Eigen::VectorXd> y_hist);

    const Dimensions& dims() const { return dims_; }
    const std::vector<Eigen::VectorXd>& u_hist() const { return u_hist_; }
    const std::vector<Eigen::VectorXd>& y_hist() const { return y_hist_; }

private:
    friend Buffers push_buffers(const Buffers& buf, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& y);

    Dimensions dims_;
    std::vector<Eigen::VectorXd> u_hist_;
    std::vector<Eigen::VectorXd> y_hist_;
};

/// x = [u; u_{k-1}; ...; u_{k-M_u}; y_{k-1}; ...; y_{k-M_y}]
struct RegressorVector {
    Eigen::VectorXd x;
};

/// Posterior over (A, W) together with the model sizes it was built for.
class MarxBeliefs {
public:
    MarxBeliefs(MatrixNormalWishart posterior, const Dimensions& dims);

    /// Prior with M_0 = m0_scale * I_{D_x x D_y}, Lambda_0 = lambda0_scale * I,
    /// Omega_0 = omega0_scale * I and nu_0 = nu0.
    static MarxBeliefs prior(const Dimensions& dims, double nu0, double m0_scale,
                             double lambda0_scale, double omega0_scale);

    const MatrixNormalWishart& posterior() const { return posterior_; }
    const Dimensions& dims() const { return dims_; }

private:
    MatrixNormalWishart posterior_;
    Dimensions dims_;
};

/// Likelihood-shaped MNW factor of a single observation. Its Wishart scale is
/// exactly zero, so it is only meaningful multiplied onto a proper prior.
struct ImproperLikelihoodMessage {
    double nu_bar;
    Eigen::MatrixXd Lambda_bar;
    Eigen::MatrixXd M_bar;
    Eigen::MatrixXd Omega_bar;
};

RegressorVector make_regressor(const Eigen::VectorXd& u, const Buffers& buf);

ImproperLikelihoodMessage likelihood_message(const RegressorVector& x, const Eigen::VectorXd& y);

/// Conjugate update with the pair (u, y) observed under buffers `buf`.
/// Buffers are not advanced; call push_buffers afterwards.
MarxBeliefs update_beliefs(const MarxBeliefs& b, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& y, const Buffers& buf);

/// Shift u and y into the memories, dropping the oldest entries.
Buffers push_buffers(const Buffers& buf, const Eigen::VectorXd& u, const Eigen::VectorXd& y);

/// Student-t posterior predictive of the next output given control u.
LocationScaleT posterior_predictive(const MarxBeliefs& b, const Eigen::VectorXd& u,
                                    const Buffers& buf);

/// -ln p(y | u, D) under the current (pre-update) beliefs.
double negative_log_evidence(const MarxBeliefs& b, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& y, const Buffers& buf);

/// Predictive parameters as a function of one contiguous block v of the
/// regressor, all other entries held fixed:
///   mean(v)  = mean0 + G^T v
///   scale(v) = 1 + x(v)^T Lambda^{-1} x(v) = c + 2 p^T v + v^T K v
/// so that Sigma(v) = Omega * scale(v) / eta.
class PredictiveSlice {
public:
    PredictiveSlice(const MarxBeliefs& b, const RegressorVector& base, Eigen::Index offset,
                    Eigen::Index length);

    Eigen::VectorXd mean(const Eigen::VectorXd& v) const { return mean0_ + G_.transpose() * v; }
    double scale(const Eigen::VectorXd& v) const { return c_ + 2.0 * p_.dot(v) + v.dot(K_ * v); }

    double eta() const { return eta_; }
    const SpdMatrix& Omega() const { return Omega_; }
    const Eigen::MatrixXd& G() const { return G_; }
    const Eigen::VectorXd& mean0() const { return mean0_; }
    double c() const { return c_; }
    const Eigen::VectorXd& p() const { return p_; }
    const Eigen::MatrixXd& K() const { return K_; }

private:
    double eta_;
    SpdMatrix Omega_;
    Eigen::MatrixXd G_;
    Eigen::VectorXd mean0_;
    double c_;
    Eigen::VectorXd p_;
    Eigen::MatrixXd K_;
};

}  // namespace marx
