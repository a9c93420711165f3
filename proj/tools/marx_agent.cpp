// Command-line driver: single trials, multi-seed sweeps and the oracle self-check.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "acceptance/criteria.hpp"
#include "marx/config.hpp"
#include "marx/errors.hpp"
#include "marx/harness.hpp"

namespace {

struct CommonFlags {
    std::string agent;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<int> steps;
    std::optional<int> horizon;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--agent", f.agent, "Agent: efe or mpc")->check(CLI::IsMember({"efe", "mpc"}));
    cmd->add_option("--config", f.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "Noise seed (first seed for sweeps)");
    cmd->add_option("--out", f.out, "Output CSV path (stdout when omitted)");
    cmd->add_option("--steps", f.steps, "Number of closed-loop steps")->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", f.horizon, "Planning horizon")->check(CLI::PositiveNumber);
}

marx::TrialConfig resolve(const CommonFlags& f) {
    marx::TrialConfig cfg;
    if (!f.config_path.empty()) cfg = marx::load_config(f.config_path);
    if (!f.agent.empty()) cfg.agent = marx::parse_agent(f.agent);
    if (f.seed) cfg.seed = *f.seed;
    if (f.steps) cfg.steps = *f.steps;
    if (f.horizon) cfg.horizon = *f.horizon;
    cfg.validate();
    return cfg;
}

template <typename Writer>
void emit(const std::string& path, Writer&& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw marx::ConfigError("cannot open output '" + path + "'");
    write(out);
}

int fail(const std::string& kind, const std::string& message) {
    std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Autoregressive active inference agent and MPC baseline on a 2D robot plant"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run = app.add_subcommand("run", "Run one closed-loop trial and write its CSV log");
    add_common(run, run_flags);

    CommonFlags sweep_flags;
    int n_seeds = 10;
    unsigned threads = 0;
    std::string trials_dir;
    auto* sweep = app.add_subcommand("sweep", "Run consecutive seeds and write per-step mean/std");
    add_common(sweep, sweep_flags);
    sweep->add_option("--seeds", n_seeds, "Number of seeds")->check(CLI::PositiveNumber);
    sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");
    sweep->add_option("--trials-dir", trials_dir, "Also write each trial's CSV into this directory");

    bool full = false;
    auto* check = app.add_subcommand("check", "Run the oracle and property fixtures");
    check->add_flag("--full", full, "Include the closed-loop behaviour criteria (minutes)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("usage", e.what());
    }

    try {
        if (*run) {
            const marx::TrialConfig cfg = resolve(run_flags);
            const marx::TrialRecord rec = marx::run_trial(cfg);
            emit(run_flags.out, [&](std::ostream& os) { marx::write_trial_csv(os, rec, cfg); });
            if (rec.optimizer_warnings > 0 || rec.laplace_fallbacks > 0)
                std::cerr << "warning: " << rec.optimizer_warnings << " optimizer budget stops, "
                          << rec.laplace_fallbacks << " Laplace fallbacks\n";
        } else if (*sweep) {
            const marx::TrialConfig cfg = resolve(sweep_flags);
            const marx::SweepResult res = marx::run_sweep(cfg, n_seeds, threads);
            if (!trials_dir.empty()) {
                std::filesystem::create_directories(trials_dir);
                for (const auto& rec : res.trials) {
                    const auto path = std::filesystem::path(trials_dir) /
                                      ("trial_seed" + std::to_string(rec.seed) + ".csv");
                    emit(path.string(), [&](std::ostream& os) { marx::write_trial_csv(os, rec, cfg); });
                }
            }
            emit(sweep_flags.out,
                 [&](std::ostream& os) { marx::write_aggregate_csv(os, res.aggregate, cfg, n_seeds); });
        } else if (*check) {
            const auto results = marx::acceptance::run_all(full, std::cout);
            for (const auto& r : results)
                if (!r.passed) return 1;
        }
    } catch (const marx::ConfigError& e) {
        return fail("config", e.what());
    } catch (const marx::TrialError& e) {
        return fail("trial", e.what());
    } catch (const marx::Error& e) {
        return fail("runtime", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}
