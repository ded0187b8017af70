#pragma once

#include <set>
#include <string>
#include <vector>

#include "qst/device.hpp"
#include "qst/lindblad.hpp"

namespace qst {

/// Raised for any configuration problem; always names the offending key.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& key, const std::string& message)
        : std::runtime_error("config key '" + key + "': " + message), key_(key) {}
    const std::string& key() const { return key_; }

  private:
    std::string key_;
};

/// Flat key=value run configuration. Defaults are the reference device
/// operating point; parse_config() overrides them and rejects anything it
/// does not recognize.
struct RunConfig {
    // device (ordinary frequencies)
    double nu_a_ghz = 2.5;
    double nu_b_ghz = 8.0;
    double delta_ghz = 1.0;        // e-channel detuning delta/2pi
    double big_delta_ghz = 0.8;    // f-channel detuning Delta/2pi
    double detuning_ratio = 10.0;  // D = delta/g
    double omega_mhz = 100.0;      // stage-2 Rabi frequency Omega/2pi
    double g_ab_ratio = 0.1;       // g_ab = ratio * g
    ConstraintMode constraint_mode = ConstraintMode::strict_eq10;
    double coupling_c = 1.0;  // g2 = c * g1
    double coupling_d = 1.0;  // mu2 = d * mu1
    bool include_crosstalk = true;

    // decoherence (lifetimes, us; inf allowed for the unitary limit)
    double kappa_inv_us = 0.1;
    double gamma_relax_inv_us = 5.0;
    double gamma_phi_inv_us = 2.0;

    // initial state
    bool state_amplitudes = false;  // false: (gamma, theta) parameterization
    double state_gamma = 0.57735026918962576;
    double state_theta_rad = 0.78539816339744831;
    double alpha_re = 0.57735026918962576, alpha_im = 0.0;
    double beta_re = 0.57735026918962576, beta_im = 0.0;
    double gamma_re = 0.57735026918962576, gamma_im = 0.0;

    // integrator
    double dt_ps = 1.0;
    StepMethod method = StepMethod::rk4_fixed;
    double local_tolerance = 1e-10;
    long max_steps = 20'000'000;
    int record_stride = 200;
    bool spectrum_checks = true;
    int n_ph = 3;

    // sweep grids
    double sweep_D_min = 4.0, sweep_D_max = 20.0;
    int sweep_D_count = 17;
    std::vector<double> sweep_kappa_inv_us{0.1, 1.0, 10.0};
    int sweep_gamma_count = 21;
    int sweep_theta_count = 41;
    bool sweep_random_states = false;
    unsigned long sweep_seed = 12345;
    int sweep_sample_count = 200;
    double sweep_c_min = 0.95, sweep_c_max = 1.05;
    int sweep_c_count = 11;
    double sweep_d_min = 0.95, sweep_d_max = 1.05;
    int sweep_d_count = 11;
    int workers = 0;  // 0: hardware concurrency; QST_WORKERS overrides

    // output
    std::string out_csv;
    std::string out_svg;

    // keys explicitly set by the user (everything else is a default)
    std::set<std::string> provided_keys;
};

/// Parses the documented key=value format ('#' comments, blank lines).
/// Total: returns a fully validated config or throws ConfigError naming the
/// offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);
RunConfig default_config();

/// Applies one "key=value" override on top of an existing config.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

/// Canonical key order with current values; flags which came from defaults.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& config);

/// Annotated default configuration text (the shipped example file).
std::string default_config_text();

// Derived simulation objects (unit conversion happens here, once).
SpaceLayout layout_from(const RunConfig& config);
DeviceParams device_from(const RunConfig& config);
DecoherenceRates rates_from(const RunConfig& config);
InitialStateSpec state_from(const RunConfig& config);
IntegratorConfig integrator_from(const RunConfig& config);

}  // namespace qst
