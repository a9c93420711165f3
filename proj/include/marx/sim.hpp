#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace marx::sim {

/// Seedable 64-bit generator (mt19937_64) with platform-independent
/// uniform and normal transforms, so trajectories are reproducible across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Standard normal via the Marsaglia polar method.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

using Vector2 = Eigen::Vector2d;
using Vector4 = Eigen::Vector4d;

struct PlantConfig {
    double dt = 0.1;
    Vector2 process_noise{1e-6, 1e-6};      // varsigma
    Vector2 measurement_noise{1e-3, 1e-3};  // rho
    Vector4 z0 = Vector4::Zero();

    bool operator==(const PlantConfig&) const = default;
};

struct PlantMatrices {
    Eigen::Matrix4d F;
    Eigen::Matrix<double, 4, 2> B;
    Eigen::Matrix<double, 2, 4> C;
    Eigen::Matrix4d Q;
    Eigen::Matrix2d R;
};

/// Discrete double integrator: position += dt * velocity, velocity += dt * u,
/// observing positions.
PlantMatrices build_matrices(const PlantConfig& cfg);

/// Lower-triangular L with L L^T = A for symmetric PSD A; columns whose pivot
/// vanishes are left at zero.
Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& A);

struct PlantState {
    Vector4 z;
    Rng rng;
};

/// Matrices and noise factors of a configured plant.
class PlantModel {
public:
    explicit PlantModel(const PlantConfig& cfg);

    const PlantConfig& config() const { return cfg_; }
    const PlantMatrices& matrices() const { return m_; }
    PlantState initial_state(std::uint64_t seed) const { return PlantState{cfg_.z0, Rng(seed)}; }

    Vector4 sample_process_noise(Rng& rng) const;
    Vector2 sample_measurement_noise(Rng& rng) const;

private:
    PlantConfig cfg_;
    PlantMatrices m_;
    Eigen::Matrix4d Q_factor_;
    Eigen::Matrix2d R_factor_;
};

struct StepResult {
    PlantState state;
    Vector2 y;
};

/// z' = F z + B u + w, y = C z' + v. Throws on non-finite u.
StepResult step(PlantState s, const Vector2& u, const PlantModel& model);

}  // namespace marx::sim
