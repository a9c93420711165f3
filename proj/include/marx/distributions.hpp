#pragma once

#include <Eigen/Core>

#include "marx/spd.hpp"

namespace marx {

/// Multivariate normal N(mean, covariance).
class Gaussian {
public:
    Gaussian(Eigen::VectorXd mean, SpdMatrix covariance);
    Gaussian(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance)
        : Gaussian(std::move(mean), SpdMatrix(covariance)) {}

    Eigen::Index dim() const { return mean_.size(); }
    const Eigen::VectorXd& mean() const { return mean_; }
    const SpdMatrix& covariance() const { return cov_; }

private:
    Eigen::VectorXd mean_;
    SpdMatrix cov_;
};

double gaussian_log_pdf(const Gaussian& g, const Eigen::VectorXd& y);

/// Matrix normal Wishart over (A, W):
///   MN(A | M, Lambda^{-1}, W^{-1}) W(W | Omega^{-1}, nu)
/// with A of shape D_x x D_y, row precision Lambda (D_x x D_x), and
/// Wishart scale Omega^{-1} (D_y x D_y).
class MatrixNormalWishart {
public:
    MatrixNormalWishart(Eigen::MatrixXd M, SpdMatrix Lambda, SpdMatrix Omega, double nu);

    Eigen::Index dim_x() const { return M_.rows(); }
    Eigen::Index dim_y() const { return M_.cols(); }
    const Eigen::MatrixXd& M() const { return M_; }
    const SpdMatrix& Lambda() const { return Lambda_; }
    const SpdMatrix& Omega() const { return Omega_; }
    double nu() const { return nu_; }

private:
    Eigen::MatrixXd M_;
    SpdMatrix Lambda_;
    SpdMatrix Omega_;
    double nu_;
};

/// Multivariate location-scale Student-t T_eta(y | mu, Sigma).
class LocationScaleT {
public:
    LocationScaleT(double eta, Eigen::VectorXd mu, SpdMatrix Sigma);

    Eigen::Index dim() const { return mu_.size(); }
    double eta() const { return eta_; }
    const Eigen::VectorXd& mu() const { return mu_; }
    const SpdMatrix& Sigma() const { return Sigma_; }

    /// Sigma * eta / (eta - 2); throws DegreesOfFreedomError for eta <= 2.
    Eigen::MatrixXd covariance() const;

private:
    double eta_;
    Eigen::VectorXd mu_;
    SpdMatrix Sigma_;
};

double t_log_pdf(const LocationScaleT& d, const Eigen::VectorXd& y);

/// Differential entropy -E[ln T(y)] in nats.
double t_entropy(const LocationScaleT& d);

/// E_{y ~ d}[-ln N(y | g.mean, g.covariance)]; requires eta > 2.
double gaussian_cross_entropy_from_t(const LocationScaleT& d, const Gaussian& g);

/// ln MN(A | M, Lambda^{-1}, W^{-1})
double mn_log_pdf(const MatrixNormalWishart& d, const Eigen::MatrixXd& A, const SpdMatrix& W);

/// ln W(W | Omega^{-1}, nu)
double wishart_log_pdf(const MatrixNormalWishart& d, const SpdMatrix& W);

/// ln MNW(A, W | M, Lambda^{-1}, Omega^{-1}, nu)
double mnw_log_pdf(const MatrixNormalWishart& d, const Eigen::MatrixXd& A, const SpdMatrix& W);

}  // namespace marx
