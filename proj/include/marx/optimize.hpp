#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

namespace marx {

struct OptimizerOptions {
    /// Objective evaluations allowed per start, gradient probes included.
    int evaluations_per_start = 200;
    int random_starts = 4;
    /// Central-difference step, relative to max(1, |x_i|).
    double fd_step = 1e-5;
    /// Convergence threshold on the infinity norm of the projected gradient,
    /// relative to max(1, |f|).
    double gradient_tolerance = 1e-9;
    std::uint64_t seed = 0x5eed5eedULL;
};

struct OptimizerResult {
    Eigen::VectorXd x;
    double value = 0.0;
    bool converged = false;
    int evaluations = 0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Minimizes f over the box [lo, hi] with projected BFGS from several starts:
/// the box center, up to four corners, `random_starts` uniform draws, and any
/// caller-supplied starts (clamped into the box). Returns the best iterate over
/// all starts; `converged` reports whether that start met the tolerance within
/// its budget.
OptimizerResult minimize_in_box(const Objective& f, const Eigen::VectorXd& lo,
                                const Eigen::VectorXd& hi, const OptimizerOptions& options,
                                const std::vector<Eigen::VectorXd>& extra_starts = {});

/// Single projected-BFGS run from x0.
OptimizerResult projected_bfgs(const Objective& f, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi, const Eigen::VectorXd& x0,
                               const OptimizerOptions& options);

}  // namespace marx
