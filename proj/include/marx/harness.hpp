#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "marx/config.hpp"
#include "marx/errors.hpp"
#include "marx/filter.hpp"

namespace marx {

/// A trial failed; carries the 1-based step index.
class TrialError : public Error {
public:
    TrialError(int step, const std::string& what);
    int step() const { return step_; }

private:
    int step_;
};

struct TrialRow {
    int k = 0;
    double t = 0.0;
    Eigen::VectorXd y;
    Eigen::VectorXd u;
    double free_energy = 0.0;  // -ln p(y_k | u_k, D_{k-1}), nats
    double dist_to_goal = 0.0;
    double ctrl_norm = 0.0;
};

struct TrialRecord {
    std::uint64_t seed = 0;
    std::vector<TrialRow> rows;
    std::optional<MarxBeliefs> final_beliefs;
    int optimizer_warnings = 0;
    int laplace_fallbacks = 0;
};

/// Closed loop for cfg.steps steps: choose a control, step the plant, log the
/// free energy under the pre-update beliefs, update beliefs, shift memories.
TrialRecord run_trial(const TrialConfig& cfg);

/// Per-step mean and population standard deviation over trials.
struct SweepAggregate {
    std::vector<std::string> metrics;  // y1, y2, u1, u2, free_energy, dist_to_goal, ctrl_norm
    std::vector<int> k;
    std::vector<double> t;
    Eigen::MatrixXd mean;  // steps x metrics
    Eigen::MatrixXd stddev;
};

struct SweepResult {
    std::vector<TrialRecord> trials;  // seeds cfg.seed, cfg.seed + 1, ...
    SweepAggregate aggregate;
};

SweepAggregate aggregate_trials(const std::vector<TrialRecord>& trials);

/// Runs n_seeds trials on `threads` workers (0 = hardware concurrency). The
/// first failing seed aborts the sweep with an Error naming it.
SweepResult run_sweep(const TrialConfig& cfg, int n_seeds, unsigned threads = 0);

/// Metric values of one row in aggregate order.
Eigen::VectorXd row_metrics(const TrialRow& row);

void write_trial_csv(std::ostream& out, const TrialRecord& record, const TrialConfig& cfg);
void write_aggregate_csv(std::ostream& out, const SweepAggregate& agg, const TrialConfig& cfg,
                         int n_seeds);

}  // namespace marx
