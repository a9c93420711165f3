#include "marx/spd.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "marx/errors.hpp"

namespace marx {

double min_symmetric_eigenvalue(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

SpdMatrix::SpdMatrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << "SpdMatrix: expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionError(os.str());
    }
    if (!m.allFinite()) throw NotPositiveDefinite("SpdMatrix: non-finite entries");
    matrix_ = 0.5 * (m + m.transpose());
    const double lo = min_symmetric_eigenvalue(matrix_);
    if (!(lo >= kMinEigenvalue)) {
        std::ostringstream os;
        os << "SpdMatrix: minimum eigenvalue " << lo << " below " << kMinEigenvalue;
        throw NotPositiveDefinite(os.str());
    }
    llt_.compute(matrix_);
    if (llt_.info() != Eigen::Success) throw NotPositiveDefinite("SpdMatrix: Cholesky failed");
}

SpdMatrix SpdMatrix::identity(Eigen::Index n, double scale) {
    return SpdMatrix(scale * Eigen::MatrixXd::Identity(n, n));
}

double SpdMatrix::log_det() const {
    return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

double SpdMatrix::inv_quad(const Eigen::VectorXd& b) const {
    const Eigen::VectorXd z = llt_.matrixL().solve(b);
    return z.squaredNorm();
}

Eigen::MatrixXd SpdMatrix::inverse() const {
    return llt_.solve(Eigen::MatrixXd::Identity(size(), size()));
}

}  // namespace marx
