#include "marx/sim.hpp"

#include <cmath>

#include "marx/errors.hpp"

namespace marx::sim {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double a, b, r2;
    do {
        a = 2.0 * uniform() - 1.0;
        b = 2.0 * uniform() - 1.0;
        r2 = a * a + b * b;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    spare_ = b * f;
    has_spare_ = true;
    return a * f;
}

PlantMatrices build_matrices(const PlantConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("plant: dt must be positive");
    if ((cfg.process_noise.array() < 0.0).any() || (cfg.measurement_noise.array() < 0.0).any())
        throw ConfigError("plant: noise intensities must be non-negative");
    const double dt = cfg.dt;
    PlantMatrices m;
    m.F.setIdentity();
    m.F(0, 2) = dt;
    m.F(1, 3) = dt;
    m.B.setZero();
    m.B(2, 0) = dt;
    m.B(3, 1) = dt;
    m.C.setZero();
    m.C(0, 0) = 1.0;
    m.C(1, 1) = 1.0;
    m.Q.setZero();
    for (int axis = 0; axis < 2; ++axis) {
        const double s = cfg.process_noise[axis];
        m.Q(axis, axis) = dt * dt * dt / 3.0 * s;
        m.Q(axis, axis + 2) = dt * dt / 2.0 * s;
        m.Q(axis + 2, axis) = dt * dt / 2.0 * s;
        m.Q(axis + 2, axis + 2) = dt * s;
    }
    m.R = cfg.measurement_noise.asDiagonal();
    return m;
}

Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    const double tiny = 1e-14 * std::max(1e-300, A.diagonal().cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = A(j, j) - L.row(j).head(j).squaredNorm();
        if (pivot <= tiny) continue;
        pivot = std::sqrt(pivot);
        L(j, j) = pivot;
        for (Eigen::Index i = j + 1; i < n; ++i)
            L(i, j) = (A(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / pivot;
    }
    return L;
}

PlantModel::PlantModel(const PlantConfig& cfg) : cfg_(cfg), m_(build_matrices(cfg)) {
    Q_factor_ = psd_cholesky(m_.Q);
    R_factor_ = psd_cholesky(m_.R);
}

Vector4 PlantModel::sample_process_noise(Rng& rng) const {
    Vector4 xi;
    for (int i = 0; i < 4; ++i) xi[i] = rng.normal();
    return Q_factor_ * xi;
}

Vector2 PlantModel::sample_measurement_noise(Rng& rng) const {
    Vector2 xi;
    for (int i = 0; i < 2; ++i) xi[i] = rng.normal();
    return R_factor_ * xi;
}

StepResult step(PlantState s, const Vector2& u, const PlantModel& model) {
    if (!u.allFinite()) throw Error("plant step: non-finite control");
    const PlantMatrices& m = model.matrices();
    const Vector4 w = model.sample_process_noise(s.rng);
    s.z = m.F * s.z + m.B * u + w;
    const Vector2 v = model.sample_measurement_noise(s.rng);
    const Vector2 y = m.C * s.z + v;
    return StepResult{std::move(s), y};
}

}  // namespace marx::sim
