#include "marx/distributions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "marx/errors.hpp"
#include "marx/special.hpp"

namespace marx {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2 pi)

void require(bool ok, const char* what) {
    if (!ok) throw DimensionError(what);
}

}  // namespace

Gaussian::Gaussian(Eigen::VectorXd mean, SpdMatrix covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance)) {
    require(mean_.size() == cov_.size(), "Gaussian: mean/covariance size mismatch");
}

double gaussian_log_pdf(const Gaussian& g, const Eigen::VectorXd& y) {
    require(y.size() == g.dim(), "gaussian_log_pdf: dimension mismatch");
    const double d = static_cast<double>(g.dim());
    return -0.5 * (d * kLog2Pi + g.covariance().log_det() + g.covariance().inv_quad(y - g.mean()));
}

MatrixNormalWishart::MatrixNormalWishart(Eigen::MatrixXd M, SpdMatrix Lambda, SpdMatrix Omega,
                                         double nu)
    : M_(std::move(M)), Lambda_(std::move(Lambda)), Omega_(std::move(Omega)), nu_(nu) {
    require(Lambda_.size() == M_.rows(), "MatrixNormalWishart: Lambda must be D_x x D_x");
    require(Omega_.size() == M_.cols(), "MatrixNormalWishart: Omega must be D_y x D_y");
    if (!(nu_ > static_cast<double>(M_.cols()) - 1.0)) {
        std::ostringstream os;
        os << "MatrixNormalWishart: nu = " << nu_ << " must exceed D_y - 1";
        throw DegreesOfFreedomError(os.str());
    }
}

LocationScaleT::LocationScaleT(double eta, Eigen::VectorXd mu, SpdMatrix Sigma)
    : eta_(eta), mu_(std::move(mu)), Sigma_(std::move(Sigma)) {
    require(mu_.size() == Sigma_.size(), "LocationScaleT: mu/Sigma size mismatch");
    if (!(eta_ > 0.0)) throw DegreesOfFreedomError("LocationScaleT: eta must be positive");
}

Eigen::MatrixXd LocationScaleT::covariance() const {
    if (!(eta_ > 2.0)) throw DegreesOfFreedomError("LocationScaleT: covariance needs eta > 2");
    return Sigma_.matrix() * (eta_ / (eta_ - 2.0));
}

double t_log_pdf(const LocationScaleT& d, const Eigen::VectorXd& y) {
    require(y.size() == d.dim(), "t_log_pdf: dimension mismatch");
    const double p = static_cast<double>(d.dim());
    const double eta = d.eta();
    const double q = d.Sigma().inv_quad(y - d.mu());
    return std::lgamma(0.5 * (eta + p)) - std::lgamma(0.5 * eta) -
           0.5 * p * std::log(eta * std::numbers::pi) - 0.5 * d.Sigma().log_det() -
           0.5 * (eta + p) * std::log1p(q / eta);
}

double t_entropy(const LocationScaleT& d) {
    const double p = static_cast<double>(d.dim());
    const double eta = d.eta();
    // ln[(eta pi)^{p/2} B(p/2, eta/2) / Gamma(p/2)]
    const double normaliser = 0.5 * p * std::log(eta * std::numbers::pi) +
                              special::log_beta(0.5 * p, 0.5 * eta) - std::lgamma(0.5 * p);
    const double tail =
        0.5 * (eta + p) * (special::digamma(0.5 * (eta + p)) - special::digamma(0.5 * eta));
    return normaliser + tail + 0.5 * d.Sigma().log_det();
}

double gaussian_cross_entropy_from_t(const LocationScaleT& d, const Gaussian& g) {
    require(d.dim() == g.dim(), "gaussian_cross_entropy_from_t: dimension mismatch");
    const double p = static_cast<double>(d.dim());
    const Eigen::VectorXd r = d.mu() - g.mean();
    const Eigen::MatrixXd second = d.covariance() + r * r.transpose();
    const double trace = g.covariance().solve(second).trace();
    return 0.5 * (p * kLog2Pi + g.covariance().log_det()) + 0.5 * trace;
}

double mn_log_pdf(const MatrixNormalWishart& d, const Eigen::MatrixXd& A, const SpdMatrix& W) {
    require(A.rows() == d.dim_x() && A.cols() == d.dim_y(), "mn_log_pdf: A shape mismatch");
    require(W.size() == d.dim_y(), "mn_log_pdf: W shape mismatch");
    const double dx = static_cast<double>(d.dim_x());
    const double dy = static_cast<double>(d.dim_y());
    const Eigen::MatrixXd R = A - d.M();
    const double quad = (W.matrix() * R.transpose() * d.Lambda().matrix() * R).trace();
    return -0.5 * dx * dy * kLog2Pi + 0.5 * dy * d.Lambda().log_det() + 0.5 * dx * W.log_det() -
           0.5 * quad;
}

double wishart_log_pdf(const MatrixNormalWishart& d, const SpdMatrix& W) {
    require(W.size() == d.dim_y(), "wishart_log_pdf: W shape mismatch");
    const int p = static_cast<int>(d.dim_y());
    const double nu = d.nu();
    return 0.5 * (nu - p - 1.0) * W.log_det() - 0.5 * (d.Omega().matrix() * W.matrix()).trace() -
           0.5 * nu * p * std::numbers::ln2 + 0.5 * nu * d.Omega().log_det() -
           special::log_multigamma(0.5 * nu, p);
}

double mnw_log_pdf(const MatrixNormalWishart& d, const Eigen::MatrixXd& A, const SpdMatrix& W) {
    return mn_log_pdf(d, A, W) + wishart_log_pdf(d, W);
}

}  // namespace marx
