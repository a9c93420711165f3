#include "marx/harness.hpp"

#include <atomic>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "marx/baseline.hpp"
#include "marx/planner.hpp"
#include "marx/sim.hpp"

namespace marx {

namespace {

std::string step_message(int step, const std::string& what) {
    std::ostringstream os;
    os << "step " << step << ": " << what;
    return os.str();
}

void write_comment_header(std::ostream& out, const TrialConfig& cfg) {
    out << "# seed = " << cfg.seed << '\n';
    std::istringstream lines(format_config(cfg));
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
}

}  // namespace

TrialError::TrialError(int step, const std::string& what)
    : Error(step_message(step, what)), step_(step) {}

TrialRecord run_trial(const TrialConfig& cfg) {
    cfg.validate();
    const Dimensions dims = cfg.dims();
    MarxBeliefs beliefs = MarxBeliefs::prior(dims, cfg.nu0, cfg.resolved_m0_scale(),
                                             cfg.lambda0_scale, cfg.omega0_scale);
    Buffers buf(dims);
    const sim::PlantModel plant(cfg.plant);
    sim::PlantState state = plant.initial_state(cfg.seed);

    const GoalPrior goal(Eigen::VectorXd(cfg.goal_mean),
                         SpdMatrix::identity(dims.D_y, cfg.goal_cov_scale));
    const ControlPrior cp{SpdMatrix::identity(dims.D_u, cfg.upsilon_scale)};
    const ControlBox box(Eigen::VectorXd(cfg.box_lo), Eigen::VectorXd(cfg.box_hi));
    PlannerOptions popts;
    popts.sweeps = cfg.sweeps;
    popts.optimizer.evaluations_per_start = cfg.evaluations_per_start;
    popts.optimizer.random_starts = cfg.random_starts;

    TrialRecord rec;
    rec.seed = cfg.seed;
    rec.rows.reserve(static_cast<std::size_t>(cfg.steps));
    std::vector<Eigen::VectorXd> warm;

    for (int k = 1; k <= cfg.steps; ++k) {
        try {
            Eigen::VectorXd u;
            if (cfg.agent == AgentKind::efe) {
                const Plan p = plan(beliefs, buf, goal, cp, box, cfg.horizon, popts);
                rec.optimizer_warnings += p.optimizer_warnings;
                rec.laplace_fallbacks += p.laplace_fallbacks;
                u = p.controls.front();
            } else {
                const MpcChoice c = mpc_select(beliefs, buf, cp, box, goal.mean(), cfg.horizon,
                                               popts.optimizer, warm);
                if (!c.converged) ++rec.optimizer_warnings;
                warm = shift_sequence(c.sequence);
                u = c.u;
            }
            if (!box.contains(u)) throw Error("control outside the box");

            sim::StepResult next = sim::step(std::move(state), sim::Vector2(u), plant);
            state = std::move(next.state);
            const Eigen::VectorXd y = next.y;

            TrialRow row;
            row.k = k;
            row.t = k * cfg.plant.dt;
            row.free_energy = negative_log_evidence(beliefs, u, y, buf);
            beliefs = update_beliefs(beliefs, u, y, buf);
            buf = push_buffers(buf, u, y);
            row.dist_to_goal = (y - goal.mean()).norm();
            row.ctrl_norm = u.norm();
            row.y = y;
            row.u = u;
            rec.rows.push_back(std::move(row));
        } catch (const TrialError&) {
            throw;
        } catch (const Error& e) {
            throw TrialError(k, e.what());
        }
    }
    rec.final_beliefs = beliefs;
    return rec;
}

Eigen::VectorXd row_metrics(const TrialRow& row) {
    Eigen::VectorXd m(row.y.size() + row.u.size() + 3);
    m << row.y, row.u, row.free_energy, row.dist_to_goal, row.ctrl_norm;
    return m;
}

SweepAggregate aggregate_trials(const std::vector<TrialRecord>& trials) {
    if (trials.empty()) throw Error("aggregate_trials: no trials");
    const auto& first = trials.front().rows;
    SweepAggregate agg;
    if (first.empty()) return agg;
    for (Eigen::Index i = 0; i < first.front().y.size(); ++i) agg.metrics.push_back("y" + std::to_string(i + 1));
    for (Eigen::Index i = 0; i < first.front().u.size(); ++i) agg.metrics.push_back("u" + std::to_string(i + 1));
    agg.metrics.insert(agg.metrics.end(), {"free_energy", "dist_to_goal", "ctrl_norm"});

    const auto steps = static_cast<Eigen::Index>(first.size());
    const auto width = static_cast<Eigen::Index>(agg.metrics.size());
    agg.mean = Eigen::MatrixXd::Zero(steps, width);
    agg.stddev = Eigen::MatrixXd::Zero(steps, width);
    for (const auto& tr : trials)
        if (tr.rows.size() != first.size()) throw Error("aggregate_trials: trials differ in length");

    const double n = static_cast<double>(trials.size());
    for (Eigen::Index s = 0; s < steps; ++s) {
        agg.k.push_back(first[static_cast<std::size_t>(s)].k);
        agg.t.push_back(first[static_cast<std::size_t>(s)].t);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(width);
        for (const auto& tr : trials) sum += row_metrics(tr.rows[static_cast<std::size_t>(s)]);
        const Eigen::VectorXd mean = sum / n;
        Eigen::VectorXd sq = Eigen::VectorXd::Zero(width);
        for (const auto& tr : trials)
            sq += (row_metrics(tr.rows[static_cast<std::size_t>(s)]) - mean).array().square().matrix();
        agg.mean.row(s) = mean.transpose();
        agg.stddev.row(s) = (sq / n).cwiseSqrt().transpose();
    }
    return agg;
}

SweepResult run_sweep(const TrialConfig& cfg, int n_seeds, unsigned threads) {
    if (n_seeds < 1) throw ConfigError("run_sweep: need at least one seed");
    cfg.validate();
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n_seeds));

    const auto n = static_cast<std::size_t>(n_seeds);
    std::vector<TrialRecord> results(n);
    std::vector<std::exception_ptr> failures(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            TrialConfig c = cfg;
            c.seed = cfg.seed + i;
            try {
                results[i] = run_trial(c);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i]) continue;
        std::string what = "unknown error";
        try {
            std::rethrow_exception(failures[i]);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        throw Error("sweep: seed " + std::to_string(cfg.seed + i) + " failed: " + what);
    }
    SweepResult out;
    out.aggregate = aggregate_trials(results);
    out.trials = std::move(results);
    return out;
}

void write_trial_csv(std::ostream& out, const TrialRecord& record, const TrialConfig& cfg) {
    TrialConfig echoed = cfg;
    echoed.seed = record.seed;
    write_comment_header(out, echoed);
    out << "k,t";
    if (!record.rows.empty()) {
        for (Eigen::Index i = 0; i < record.rows.front().y.size(); ++i) out << ",y" << i + 1;
        for (Eigen::Index i = 0; i < record.rows.front().u.size(); ++i) out << ",u" << i + 1;
    } else {
        out << ",y1,y2,u1,u2";
    }
    out << ",free_energy,dist_to_goal,ctrl_norm\n";
    for (const auto& r : record.rows) {
        out << r.k << ',' << format_real(r.t);
        for (Eigen::Index i = 0; i < r.y.size(); ++i) out << ',' << format_real(r.y[i]);
        for (Eigen::Index i = 0; i < r.u.size(); ++i) out << ',' << format_real(r.u[i]);
        out << ',' << format_real(r.free_energy) << ',' << format_real(r.dist_to_goal) << ','
            << format_real(r.ctrl_norm) << '\n';
    }
}

void write_aggregate_csv(std::ostream& out, const SweepAggregate& agg, const TrialConfig& cfg,
                         int n_seeds) {
    write_comment_header(out, cfg);
    out << "# n_seeds = " << n_seeds << '\n';
    out << "k,t";
    for (const auto& m : agg.metrics) out << ',' << m << "_mean," << m << "_std";
    out << '\n';
    for (std::size_t s = 0; s < agg.k.size(); ++s) {
        out << agg.k[s] << ',' << format_real(agg.t[s]);
        const auto row = static_cast<Eigen::Index>(s);
        for (Eigen::Index j = 0; j < agg.mean.cols(); ++j)
            out << ',' << format_real(agg.mean(row, j)) << ',' << format_real(agg.stddev(row, j));
        out << '\n';
    }
}

}  // namespace marx
