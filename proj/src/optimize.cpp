#include "marx/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "marx/errors.hpp"

namespace marx {

namespace {

class CountedObjective {
public:
    CountedObjective(const Objective& f, int budget) : f_(f), budget_(budget) {}

    double operator()(const Eigen::VectorXd& x) {
        ++count_;
        const double v = f_(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    }
    bool exhausted() const { return count_ >= budget_; }
    int remaining() const { return budget_ - count_; }
    int count() const { return count_; }

private:
    const Objective& f_;
    int budget_;
    int count_ = 0;
};

Eigen::VectorXd clamp(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

Eigen::VectorXd fd_gradient(CountedObjective& f, const Eigen::VectorXd& x, double fx,
                            const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double rel_step) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd g(n);
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = rel_step * std::max(1.0, std::abs(x[i]));
        const bool up = x[i] + h <= hi[i];
        const bool down = x[i] - h >= lo[i];
        if (up && down) {
            probe[i] = x[i] + h;
            const double fp = f(probe);
            probe[i] = x[i] - h;
            const double fm = f(probe);
            g[i] = (fp - fm) / (2.0 * h);
        } else if (up) {
            probe[i] = x[i] + h;
            g[i] = (f(probe) - fx) / h;
        } else {
            probe[i] = x[i] - h;
            g[i] = (fx - f(probe)) / h;
        }
        probe[i] = x[i];
    }
    return g;
}

// Coordinates pinned at a bound with the gradient pushing outward.
std::vector<bool> active_set(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                             const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    std::vector<bool> active(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double tol = 1e-12 * std::max(1.0, std::abs(x[i]));
        active[static_cast<std::size_t>(i)] =
            (x[i] <= lo[i] + tol && g[i] > 0.0) || (x[i] >= hi[i] - tol && g[i] < 0.0);
    }
    return active;
}

std::vector<Eigen::VectorXd> corner_starts(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    const Eigen::Index n = lo.size();
    std::vector<Eigen::VectorXd> out;
    if (n <= 2) {
        const int count = 1 << n;
        for (int mask = 0; mask < count; ++mask) {
            Eigen::VectorXd c(n);
            for (Eigen::Index i = 0; i < n; ++i) c[i] = (mask >> i) & 1 ? hi[i] : lo[i];
            out.push_back(c);
        }
        return out;
    }
    // all-low, all-high and the two alternating patterns
    for (int pattern = 0; pattern < 4; ++pattern) {
        Eigen::VectorXd c(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            bool high = pattern == 1 || (pattern == 2 && i % 2 == 0) || (pattern == 3 && i % 2 == 1);
            c[i] = high ? hi[i] : lo[i];
        }
        out.push_back(c);
    }
    return out;
}

// Portable uniform draw in [0, 1).
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

OptimizerResult projected_bfgs(const Objective& objective, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi, const Eigen::VectorXd& x0,
                               const OptimizerOptions& options) {
    const Eigen::Index n = x0.size();
    CountedObjective f(objective, options.evaluations_per_start);
    OptimizerResult res;
    res.x = clamp(x0, lo, hi);
    res.value = f(res.x);

    Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
    bool scaled = false;
    std::vector<bool> last_active;
    Eigen::VectorXd g;
    bool have_g = false;

    while (f.remaining() > 2 * n) {
        if (!have_g) g = fd_gradient(f, res.x, res.value, lo, hi, options.fd_step);
        have_g = false;
        const std::vector<bool> active = active_set(res.x, g, lo, hi);
        Eigen::VectorXd g_free = g;
        for (Eigen::Index i = 0; i < n; ++i)
            if (active[static_cast<std::size_t>(i)]) g_free[i] = 0.0;

        const double fscale = std::max(1.0, std::abs(res.value));
        const Eigen::VectorXd width = (hi - lo).cwiseMin(1e300);
        const double pg = g_free.cwiseProduct(width.cwiseMin(1.0)).lpNorm<Eigen::Infinity>();
        if (pg <= options.gradient_tolerance * fscale) {
            res.converged = true;
            break;
        }
        if (active != last_active) {
            Hinv.setIdentity();
            scaled = false;
            last_active = active;
        }

        Eigen::VectorXd d = -(Hinv * g_free);
        for (Eigen::Index i = 0; i < n; ++i)
            if (active[static_cast<std::size_t>(i)]) d[i] = 0.0;
        if (d.dot(g_free) >= 0.0) {
            Hinv.setIdentity();
            scaled = false;
            d = -g_free;
        }
        if (!scaled) {
            // First step of a fresh metric: cap the move at the box width.
            const double span = std::isfinite(width.maxCoeff()) ? width.maxCoeff() : 1.0;
            const double dn = d.lpNorm<Eigen::Infinity>();
            if (dn > span) d *= span / dn;
        }

        double alpha = 1.0;
        bool accepted = false;
        Eigen::VectorXd x_new;
        double f_new = 0.0;
        while (!f.exhausted()) {
            x_new = clamp(res.x + alpha * d, lo, hi);
            f_new = f(x_new);
            if (f_new <= res.value + 1e-4 * g_free.dot(x_new - res.x)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-20) break;
        }
        if (!accepted) {
            if (!scaled) {
                // Steepest descent failed too: numerically stationary.
                res.converged = true;
                break;
            }
            Hinv.setIdentity();
            scaled = false;
            have_g = true;
            continue;
        }

        const Eigen::VectorXd s = x_new - res.x;
        const double f_old = res.value;
        res.x = x_new;
        res.value = f_new;
        if (s.lpNorm<Eigen::Infinity>() <= 1e-15 * std::max(1.0, res.x.lpNorm<Eigen::Infinity>()) &&
            std::abs(f_old - f_new) <= 1e-15 * fscale) {
            res.converged = true;
            break;
        }
        if (f.remaining() <= 2 * n) break;
        const Eigen::VectorXd g_new = fd_gradient(f, res.x, res.value, lo, hi, options.fd_step);
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                Hinv *= sy / y.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) +
                   rho * s * s.transpose();
        }
        g = g_new;
        have_g = true;
    }
    res.evaluations = f.count();
    return res;
}

OptimizerResult minimize_in_box(const Objective& f, const Eigen::VectorXd& lo,
                                const Eigen::VectorXd& hi, const OptimizerOptions& options,
                                const std::vector<Eigen::VectorXd>& extra_starts) {
    if (lo.size() != hi.size() || lo.size() == 0)
        throw DimensionError("minimize_in_box: bound size mismatch");
    if (!(lo.array() < hi.array()).all())
        throw DimensionError("minimize_in_box: lower bound must be below upper bound");
    const bool bounded = lo.allFinite() && hi.allFinite();

    std::vector<Eigen::VectorXd> starts;
    if (bounded) {
        starts.push_back(0.5 * (lo + hi));
        for (auto& c : corner_starts(lo, hi)) starts.push_back(std::move(c));
        std::mt19937_64 rng(options.seed);
        for (int r = 0; r < options.random_starts; ++r) {
            Eigen::VectorXd s(lo.size());
            for (Eigen::Index i = 0; i < lo.size(); ++i)
                s[i] = lo[i] + (hi[i] - lo[i]) * unit_uniform(rng);
            starts.push_back(s);
        }
    }
    for (const auto& s : extra_starts) {
        if (s.size() != lo.size()) throw DimensionError("minimize_in_box: start size mismatch");
        starts.push_back(clamp(s, lo, hi));
    }
    if (starts.empty()) throw DimensionError("minimize_in_box: unbounded problem needs a start");

    OptimizerResult best;
    best.value = std::numeric_limits<double>::infinity();
    int total = 0;
    for (const auto& s : starts) {
        OptimizerResult r = projected_bfgs(f, lo, hi, s, options);
        total += r.evaluations;
        if (best.x.size() == 0 || r.value < best.value) best = std::move(r);
    }
    best.evaluations = total;
    return best;
}

}  // namespace marx
