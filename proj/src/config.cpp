#include "qst/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace qst {

namespace {

double parse_number(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError(key, "unparsable number '" + value + "'");
    return v;
}

double parse_positive(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    if (!(v > 0)) throw ConfigError(key, "must be positive, got '" + value + "'");
    return v;
}

double parse_lifetime(const std::string& key, const std::string& value) {
    // Lifetimes must be positive; 'inf' selects the unitary limit (zero rate).
    const double v = parse_number(key, value);
    if (std::isnan(v) || v <= 0) throw ConfigError(key, "lifetime must be positive or inf");
    return v;
}

long parse_integer(const std::string& key, const std::string& value, long min_value) {
    const double v = parse_number(key, value);
    if (v != std::floor(v)) throw ConfigError(key, "must be an integer");
    if (v < static_cast<double>(min_value))
        throw ConfigError(key, "must be >= " + std::to_string(min_value));
    return static_cast<long>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(key, "expected true/false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const size_t a = item.find_first_not_of(" \t");
        const size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw ConfigError(key, "empty list element");
        out.push_back(parse_positive(key, item.substr(a, b - a + 1)));
    }
    if (out.empty()) throw ConfigError(key, "list must not be empty");
    return out;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct KeyDef {
    const char* name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeyDef>& key_table() {
    auto num = [](const char* name, double RunConfig::* field, bool positive) {
        return KeyDef{name,
                      [name, field, positive](RunConfig& c, const std::string& v) {
                          c.*field = positive ? parse_positive(name, v) : parse_number(name, v);
                      },
                      [field](const RunConfig& c) { return format_value(c.*field); }};
    };
    auto lifetime = [](const char* name, double RunConfig::* field) {
        return KeyDef{name,
                      [name, field](RunConfig& c, const std::string& v) {
                          c.*field = parse_lifetime(name, v);
                      },
                      [field](const RunConfig& c) { return format_value(c.*field); }};
    };
    auto boolean = [](const char* name, bool RunConfig::* field) {
        return KeyDef{name,
                      [name, field](RunConfig& c, const std::string& v) {
                          c.*field = parse_bool(name, v);
                      },
                      [field](const RunConfig& c) { return std::string(c.*field ? "true" : "false"); }};
    };
    auto integer = [](const char* name, int RunConfig::* field, int min_value) {
        return KeyDef{name,
                      [name, field, min_value](RunConfig& c, const std::string& v) {
                          c.*field = static_cast<int>(parse_integer(name, v, min_value));
                      },
                      [field](const RunConfig& c) { return std::to_string(c.*field); }};
    };

    static const std::vector<KeyDef> table = {
        // device
        num("nu_a_GHz", &RunConfig::nu_a_ghz, true),
        num("nu_b_GHz", &RunConfig::nu_b_ghz, true),
        num("delta_GHz", &RunConfig::delta_ghz, true),
        num("Delta_GHz", &RunConfig::big_delta_ghz, true),
        {"D",
         [](RunConfig& c, const std::string& v) {
             c.detuning_ratio = parse_positive("D", v);
             if (c.detuning_ratio <= 1.0) throw ConfigError("D", "must exceed 1");
         },
         [](const RunConfig& c) { return format_value(c.detuning_ratio); }},
        num("Omega_MHz", &RunConfig::omega_mhz, true),
        {"g_ab_ratio",
         [](RunConfig& c, const std::string& v) {
             c.g_ab_ratio = parse_number("g_ab_ratio", v);
             if (c.g_ab_ratio < 0) throw ConfigError("g_ab_ratio", "must be >= 0");
         },
         [](const RunConfig& c) { return format_value(c.g_ab_ratio); }},
        {"constraint_mode",
         [](RunConfig& c, const std::string& v) {
             const auto mode = constraint_mode_from_string(v);
             if (!mode)
                 throw ConfigError("constraint_mode",
                                   "expected strict_eq10 or paper_literal, got '" + v + "'");
             c.constraint_mode = *mode;
         },
         [](const RunConfig& c) { return std::string(to_string(c.constraint_mode)); }},
        num("coupling_c", &RunConfig::coupling_c, true),
        num("coupling_d", &RunConfig::coupling_d, true),
        boolean("include_crosstalk", &RunConfig::include_crosstalk),
        // decoherence
        lifetime("kappa_inv_us", &RunConfig::kappa_inv_us),
        lifetime("gamma_relax_inv_us", &RunConfig::gamma_relax_inv_us),
        lifetime("gamma_phi_inv_us", &RunConfig::gamma_phi_inv_us),
        // initial state
        boolean("state_amplitudes", &RunConfig::state_amplitudes),
        {"state_gamma",
         [](RunConfig& c, const std::string& v) {
             c.state_gamma = parse_number("state_gamma", v);
             if (c.state_gamma < 0 || c.state_gamma > 1)
                 throw ConfigError("state_gamma", "must lie in [0, 1]");
         },
         [](const RunConfig& c) { return format_value(c.state_gamma); }},
        num("state_theta_rad", &RunConfig::state_theta_rad, false),
        num("alpha_re", &RunConfig::alpha_re, false),
        num("alpha_im", &RunConfig::alpha_im, false),
        num("beta_re", &RunConfig::beta_re, false),
        num("beta_im", &RunConfig::beta_im, false),
        num("gamma_re", &RunConfig::gamma_re, false),
        num("gamma_im", &RunConfig::gamma_im, false),
        // integrator
        num("dt_ps", &RunConfig::dt_ps, true),
        {"method",
         [](RunConfig& c, const std::string& v) {
             if (v == "rk4_fixed") c.method = StepMethod::rk4_fixed;
             else if (v == "rk4_step_doubling") c.method = StepMethod::rk4_step_doubling;
             else
                 throw ConfigError("method",
                                   "expected rk4_fixed or rk4_step_doubling, got '" + v + "'");
         },
         [](const RunConfig& c) {
             return std::string(c.method == StepMethod::rk4_fixed ? "rk4_fixed"
                                                                  : "rk4_step_doubling");
         }},
        num("local_tolerance", &RunConfig::local_tolerance, true),
        {"max_steps",
         [](RunConfig& c, const std::string& v) { c.max_steps = parse_integer("max_steps", v, 1); },
         [](const RunConfig& c) { return std::to_string(c.max_steps); }},
        integer("record_stride", &RunConfig::record_stride, 1),
        boolean("spectrum_checks", &RunConfig::spectrum_checks),
        integer("n_ph", &RunConfig::n_ph, 2),
        // sweep grids
        num("sweep_D_min", &RunConfig::sweep_D_min, true),
        num("sweep_D_max", &RunConfig::sweep_D_max, true),
        integer("sweep_D_count", &RunConfig::sweep_D_count, 1),
        {"sweep_kappa_inv_us",
         [](RunConfig& c, const std::string& v) {
             c.sweep_kappa_inv_us = parse_list("sweep_kappa_inv_us", v);
         },
         [](const RunConfig& c) {
             std::string out;
             for (size_t i = 0; i < c.sweep_kappa_inv_us.size(); ++i)
                 out += (i ? "," : "") + format_value(c.sweep_kappa_inv_us[i]);
             return out;
         }},
        integer("sweep_gamma_count", &RunConfig::sweep_gamma_count, 1),
        integer("sweep_theta_count", &RunConfig::sweep_theta_count, 1),
        boolean("sweep_random_states", &RunConfig::sweep_random_states),
        {"sweep_seed",
         [](RunConfig& c, const std::string& v) {
             c.sweep_seed = static_cast<unsigned long>(parse_integer("sweep_seed", v, 0));
         },
         [](const RunConfig& c) { return std::to_string(c.sweep_seed); }},
        integer("sweep_sample_count", &RunConfig::sweep_sample_count, 1),
        num("sweep_c_min", &RunConfig::sweep_c_min, true),
        num("sweep_c_max", &RunConfig::sweep_c_max, true),
        integer("sweep_c_count", &RunConfig::sweep_c_count, 1),
        num("sweep_d_min", &RunConfig::sweep_d_min, true),
        num("sweep_d_max", &RunConfig::sweep_d_max, true),
        integer("sweep_d_count", &RunConfig::sweep_d_count, 1),
        integer("workers", &RunConfig::workers, 0),
        // output
        {"out_csv", [](RunConfig& c, const std::string& v) { c.out_csv = v; },
         [](const RunConfig& c) { return c.out_csv; }},
        {"out_svg", [](RunConfig& c, const std::string& v) { c.out_svg = v; },
         [](const RunConfig& c) { return c.out_svg; }},
    };
    return table;
}

const KeyDef* find_key(const std::string& key) {
    for (const auto& def : key_table())
        if (key == def.name) return &def;
    return nullptr;
}

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void cross_validate(const RunConfig& c) {
    if (c.sweep_D_min > c.sweep_D_max) throw ConfigError("sweep_D_min", "range is not ordered");
    if (c.sweep_c_min > c.sweep_c_max) throw ConfigError("sweep_c_min", "range is not ordered");
    if (c.sweep_d_min > c.sweep_d_max) throw ConfigError("sweep_d_min", "range is not ordered");
    if (c.sweep_D_min <= 1.0) throw ConfigError("sweep_D_min", "D must exceed 1");
    // Completes the state check so a bad config never reaches the simulation.
    state_from(c);
}

}  // namespace

void apply_override(RunConfig& config, const std::string& key, const std::string& value) {
    const KeyDef* def = find_key(key);
    if (!def) throw ConfigError(key, "unknown key");
    def->set(config, value);
    config.provided_keys.insert(key);
}

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "line " + std::to_string(line_no) + " is not key=value");
        apply_override(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    cross_validate(config);
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

RunConfig default_config() { return parse_config(""); }

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& config) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& def : key_table()) {
        std::string value = def.get(config);
        if (!config.provided_keys.count(def.name)) value += " (default)";
        out.emplace_back(def.name, std::move(value));
    }
    return out;
}

SpaceLayout layout_from(const RunConfig& config) { return SpaceLayout(config.n_ph); }

DeviceParams device_from(const RunConfig& config) {
    DeviceParams p = DeviceParams::from_frequencies(config.nu_a_ghz, config.nu_b_ghz,
                                                    config.delta_ghz, config.big_delta_ghz,
                                                    config.detuning_ratio, config.omega_mhz,
                                                    config.g_ab_ratio);
    p = solve_constraints(p, config.constraint_mode);
    p.apply_inhomogeneity(config.coupling_c, config.coupling_d);
    return p;
}

DecoherenceRates rates_from(const RunConfig& config) {
    return DecoherenceRates::from_lifetimes_us(config.kappa_inv_us, config.gamma_relax_inv_us,
                                               config.gamma_phi_inv_us);
}

InitialStateSpec state_from(const RunConfig& config) {
    InitialStateSpec spec;
    if (config.state_amplitudes) {
        spec.alpha = {config.alpha_re, config.alpha_im};
        spec.beta = {config.beta_re, config.beta_im};
        spec.gamma = {config.gamma_re, config.gamma_im};
        try {
            spec.validate();
        } catch (const std::exception& e) {
            throw ConfigError("alpha_re", e.what());
        }
    } else {
        spec = InitialStateSpec::from_theta(config.state_gamma, config.state_theta_rad);
    }
    return spec;
}

IntegratorConfig integrator_from(const RunConfig& config) {
    IntegratorConfig ic;
    ic.dt = config.dt_ps * 1e-3;
    ic.method = config.method;
    ic.local_tolerance = config.local_tolerance;
    ic.max_steps = config.max_steps;
    ic.record_stride = config.record_stride;
    ic.spectrum_checks = config.spectrum_checks;
    ic.validate();
    return ic;
}

std::string default_config_text() {
    return R"(# qst run configuration (key = value, '#' starts a comment).
# Unknown keys are rejected; omitted keys fall back to the reference
# operating point listed below.

# --- device (ordinary frequencies nu = omega/2pi) ---
nu_a_GHz = 2.5            # resonator a
nu_b_GHz = 8.0            # resonator b
delta_GHz = 1.0           # e-channel detuning (qutrit e-level sits above resonator a)
Delta_GHz = 0.8           # f-channel detuning (capital D: f-channel)
D = 10                    # detuning ratio delta/g; sets g = delta/D (g/2pi = 100 MHz here)
Omega_MHz = 100           # stage-2 drive Rabi frequency
g_ab_ratio = 0.1          # inter-resonator crosstalk g_ab = 0.1 g
constraint_mode = strict_eq10   # or paper_literal (mu = g Delta/delta)
coupling_c = 1.0          # qutrit-2 coupling factor g2 = c g1
coupling_d = 1.0          # qutrit-2 coupling factor mu2 = d mu1
include_crosstalk = true

# --- decoherence (lifetimes in us; 'inf' disables a channel) ---
kappa_inv_us = 0.1        # photon lifetime, both resonators
gamma_relax_inv_us = 5    # qutrit relaxation, all three paths
gamma_phi_inv_us = 2      # qutrit dephasing, e and f levels

# --- initial state of qutrit 1 ---
# Default parameterization: alpha = sqrt(1-gamma^2) sin(theta),
# beta = sqrt(1-gamma^2) cos(theta). The defaults give the uniform state
# alpha = beta = gamma = 1/sqrt(3).
state_amplitudes = false
state_gamma = 0.57735026918962576
state_theta_rad = 0.78539816339744831
# With state_amplitudes = true, the complex amplitudes are taken verbatim and
# must be normalized to within 1e-10:
# alpha_re = 0.70710678118654752   # example: (1/sqrt2, 1/sqrt3, 1/sqrt6)
# beta_re  = 0.57735026918962576
# gamma_re = 0.40824829046386302

# --- integrator ---
dt_ps = 1.0               # fixed RK4 step; resolves the 5.5 GHz crosstalk phase
method = rk4_fixed        # or rk4_step_doubling
local_tolerance = 1e-10   # step-doubling mode only
max_steps = 20000000
record_stride = 200       # diagnostics every this many steps
spectrum_checks = true    # min-eigenvalue estimate at recorded points
n_ph = 3                  # Fock levels per resonator

# --- sweeps ---
sweep_D_min = 4
sweep_D_max = 20
sweep_D_count = 17
sweep_kappa_inv_us = 0.1,1,10
sweep_gamma_count = 21
sweep_theta_count = 41
sweep_random_states = false   # true: seeded random (gamma, theta) samples
sweep_seed = 12345
sweep_sample_count = 200
sweep_c_min = 0.95
sweep_c_max = 1.05
sweep_c_count = 11
sweep_d_min = 0.95            # lower-case d: mu2/mu1 grid
sweep_d_max = 1.05
sweep_d_count = 11
workers = 0                   # 0 = hardware concurrency; QST_WORKERS overrides

# --- output ---
out_csv =
out_svg =
)";
}

}  // namespace qst
