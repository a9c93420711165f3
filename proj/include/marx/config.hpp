#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "marx/filter.hpp"
#include "marx/sim.hpp"

namespace marx {

enum class AgentKind { efe, mpc };

std::string to_string(AgentKind kind);
AgentKind parse_agent(const std::string& name);

/// Everything a closed-loop trial needs. Defaults reproduce the robot
/// navigation setup: weakly informative priors, goal [0, 1], box [-1, 1]^2.
struct TrialConfig {
    AgentKind agent = AgentKind::efe;
    int steps = 10000;
    int horizon = 3;
    int memory_u = 2;
    int memory_y = 2;

    double nu0 = 100.0;
    /// Defaults to 1 / (D_x D_y) when unset.
    std::optional<double> m0_scale;
    double lambda0_scale = 1e-2;
    double omega0_scale = 1.0;
    double upsilon_scale = 1e-6;

    Eigen::Vector2d goal_mean{0.0, 1.0};
    double goal_cov_scale = 1e-6;
    Eigen::Vector2d box_lo{-1.0, -1.0};
    Eigen::Vector2d box_hi{1.0, 1.0};

    sim::PlantConfig plant;
    std::uint64_t seed = 0;
    int sweeps = 1;
    int evaluations_per_start = 200;
    int random_starts = 4;

    Dimensions dims() const { return Dimensions{2, 2, memory_u, memory_y}; }
    double resolved_m0_scale() const;
    /// Throws ConfigError on values outside their domain.
    void validate() const;

    bool operator==(const TrialConfig&) const = default;
};

/// Reads `key = value` lines on top of `base`. Arrays are bracketed,
/// `#` starts a comment, unknown keys and malformed values raise ConfigError.
TrialConfig parse_config(std::istream& in, TrialConfig base = {});
TrialConfig load_config(const std::string& path, TrialConfig base = {});

/// One `key = value` line per field, fully resolved, 17 significant digits.
std::string format_config(const TrialConfig& cfg);

/// printf("%.17g")
std::string format_real(double v);

}  // namespace marx
