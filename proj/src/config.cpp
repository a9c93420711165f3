#include "marx/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "marx/errors.hpp"

namespace marx {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' expects a number, got '" + t + "'");
    }
    if (used != t.size()) throw ConfigError("config: '" + key + "' has trailing characters");
    return v;
}

long long parse_integer(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(t, &used);
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' expects an integer, got '" + t + "'");
    }
    if (used != t.size()) throw ConfigError("config: '" + key + "' expects an integer, got '" + t + "'");
    return v;
}

std::vector<double> parse_array(const std::string& text, const std::string& key, std::size_t n) {
    const std::string t = trim(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw ConfigError("config: '" + key + "' expects a bracketed array");
    std::vector<double> out;
    std::stringstream body(t.substr(1, t.size() - 2));
    std::string item;
    while (std::getline(body, item, ',')) out.push_back(parse_real(item, key));
    if (out.size() != n) {
        std::ostringstream os;
        os << "config: '" << key << "' expects " << n << " entries, got " << out.size();
        throw ConfigError(os.str());
    }
    return out;
}

template <int N>
Eigen::Matrix<double, N, 1> parse_fixed(const std::string& text, const std::string& key) {
    const auto v = parse_array(text, key, N);
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) out[i] = v[static_cast<std::size_t>(i)];
    return out;
}

template <typename Vec>
std::string format_array(const Vec& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_real(v[i]);
    }
    return out + "]";
}

using Setter = std::function<void(TrialConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"agent", [](TrialConfig& c, const std::string& v, const std::string&) { c.agent = parse_agent(trim(v)); }},
        {"steps", [](TrialConfig& c, const std::string& v, const std::string& k) { c.steps = static_cast<int>(parse_integer(v, k)); }},
        {"horizon", [](TrialConfig& c, const std::string& v, const std::string& k) { c.horizon = static_cast<int>(parse_integer(v, k)); }},
        {"memory_u", [](TrialConfig& c, const std::string& v, const std::string& k) { c.memory_u = static_cast<int>(parse_integer(v, k)); }},
        {"memory_y", [](TrialConfig& c, const std::string& v, const std::string& k) { c.memory_y = static_cast<int>(parse_integer(v, k)); }},
        {"nu0", [](TrialConfig& c, const std::string& v, const std::string& k) { c.nu0 = parse_real(v, k); }},
        {"m0_scale", [](TrialConfig& c, const std::string& v, const std::string& k) {
             if (trim(v) == "auto") c.m0_scale.reset();
             else c.m0_scale = parse_real(v, k);
         }},
        {"lambda0_scale", [](TrialConfig& c, const std::string& v, const std::string& k) { c.lambda0_scale = parse_real(v, k); }},
        {"omega0_scale", [](TrialConfig& c, const std::string& v, const std::string& k) { c.omega0_scale = parse_real(v, k); }},
        {"upsilon_scale", [](TrialConfig& c, const std::string& v, const std::string& k) { c.upsilon_scale = parse_real(v, k); }},
        {"goal_mean", [](TrialConfig& c, const std::string& v, const std::string& k) { c.goal_mean = parse_fixed<2>(v, k); }},
        {"goal_cov_scale", [](TrialConfig& c, const std::string& v, const std::string& k) { c.goal_cov_scale = parse_real(v, k); }},
        {"box_lo", [](TrialConfig& c, const std::string& v, const std::string& k) { c.box_lo = parse_fixed<2>(v, k); }},
        {"box_hi", [](TrialConfig& c, const std::string& v, const std::string& k) { c.box_hi = parse_fixed<2>(v, k); }},
        {"dt", [](TrialConfig& c, const std::string& v, const std::string& k) { c.plant.dt = parse_real(v, k); }},
        {"process_noise", [](TrialConfig& c, const std::string& v, const std::string& k) { c.plant.process_noise = parse_fixed<2>(v, k); }},
        {"measurement_noise", [](TrialConfig& c, const std::string& v, const std::string& k) { c.plant.measurement_noise = parse_fixed<2>(v, k); }},
        {"z0", [](TrialConfig& c, const std::string& v, const std::string& k) { c.plant.z0 = parse_fixed<4>(v, k); }},
        {"seed", [](TrialConfig& c, const std::string& v, const std::string& k) {
             const long long s = parse_integer(v, k);
             if (s < 0) throw ConfigError("config: 'seed' must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
        {"sweeps", [](TrialConfig& c, const std::string& v, const std::string& k) { c.sweeps = static_cast<int>(parse_integer(v, k)); }},
        {"evaluations_per_start", [](TrialConfig& c, const std::string& v, const std::string& k) { c.evaluations_per_start = static_cast<int>(parse_integer(v, k)); }},
        {"random_starts", [](TrialConfig& c, const std::string& v, const std::string& k) { c.random_starts = static_cast<int>(parse_integer(v, k)); }},
    };
    return table;
}

}  // namespace

std::string to_string(AgentKind kind) { return kind == AgentKind::efe ? "efe" : "mpc"; }

AgentKind parse_agent(const std::string& name) {
    if (name == "efe") return AgentKind::efe;
    if (name == "mpc") return AgentKind::mpc;
    throw ConfigError("config: agent must be 'efe' or 'mpc', got '" + name + "'");
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double TrialConfig::resolved_m0_scale() const {
    if (m0_scale) return *m0_scale;
    const Dimensions d = dims();
    return 1.0 / static_cast<double>(d.dim_x() * d.D_y);
}

void TrialConfig::validate() const {
    auto need = [](bool ok, const char* msg) {
        if (!ok) throw ConfigError(msg);
    };
    need(steps >= 1, "config: steps must be >= 1");
    need(horizon >= 1, "config: horizon must be >= 1");
    need(memory_u >= 0 && memory_y >= 0, "config: memory lengths must be >= 0");
    need(nu0 > 1.0, "config: nu0 must exceed D_y - 1");
    need(lambda0_scale > 0.0 && omega0_scale > 0.0 && upsilon_scale > 0.0,
         "config: prior scales must be positive");
    need(goal_cov_scale > 0.0, "config: goal_cov_scale must be positive");
    need((box_lo.array() < box_hi.array()).all(), "config: box_lo must be below box_hi");
    need(plant.dt > 0.0, "config: dt must be positive");
    need((plant.process_noise.array() >= 0.0).all() && (plant.measurement_noise.array() >= 0.0).all(),
         "config: noise intensities must be non-negative");
    need(sweeps >= 0, "config: sweeps must be >= 0");
    need(evaluations_per_start >= 10, "config: evaluations_per_start must be >= 10");
    need(random_starts >= 0, "config: random_starts must be >= 0");
}

TrialConfig parse_config(std::istream& in, TrialConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "config line " << lineno << ": expected 'key = value'";
            throw ConfigError(os.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = line.substr(eq + 1);
        const auto it = setters().find(key);
        if (it == setters().end()) {
            std::ostringstream os;
            os << "config line " << lineno << ": unknown key '" << key << "'";
            throw ConfigError(os.str());
        }
        it->second(base, value, key);
    }
    return base;
}

TrialConfig load_config(const std::string& path, TrialConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    return parse_config(in, std::move(base));
}

std::string format_config(const TrialConfig& c) {
    std::ostringstream os;
    os << "agent = " << to_string(c.agent) << '\n'
       << "steps = " << c.steps << '\n'
       << "horizon = " << c.horizon << '\n'
       << "memory_u = " << c.memory_u << '\n'
       << "memory_y = " << c.memory_y << '\n'
       << "nu0 = " << format_real(c.nu0) << '\n'
       << "m0_scale = " << format_real(c.resolved_m0_scale()) << '\n'
       << "lambda0_scale = " << format_real(c.lambda0_scale) << '\n'
       << "omega0_scale = " << format_real(c.omega0_scale) << '\n'
       << "upsilon_scale = " << format_real(c.upsilon_scale) << '\n'
       << "goal_mean = " << format_array(c.goal_mean) << '\n'
       << "goal_cov_scale = " << format_real(c.goal_cov_scale) << '\n'
       << "box_lo = " << format_array(c.box_lo) << '\n'
       << "box_hi = " << format_array(c.box_hi) << '\n'
       << "dt = " << format_real(c.plant.dt) << '\n'
       << "process_noise = " << format_array(c.plant.process_noise) << '\n'
       << "measurement_noise = " << format_array(c.plant.measurement_noise) << '\n'
       << "z0 = " << format_array(c.plant.z0) << '\n'
       << "seed = " << c.seed << '\n'
       << "sweeps = " << c.sweeps << '\n'
       << "evaluations_per_start = " << c.evaluations_per_start << '\n'
       << "random_starts = " << c.random_starts << '\n';
    return os.str();
}

}  // namespace marx
