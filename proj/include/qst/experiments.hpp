#pragma once

#include <string>
#include <vector>

#include "qst/config.hpp"
#include "qst/protocol.hpp"

namespace qst {

enum class SweepKind { detuning, state_grid, coupling, convergence };

const char* to_string(SweepKind kind);

/// Grid definition for one sweep, together with the base scenario every grid
/// point starts from.
struct SweepSpec {
    RunConfig base;
    SweepKind kind = SweepKind::detuning;

    // detuning sweep
    double d_min = 4.0, d_max = 20.0;
    int d_count = 17;
    std::vector<double> kappa_inv_us{0.1, 1.0, 10.0};

    // state grid (gamma, theta)
    int gamma_count = 21;
    int theta_count = 41;
    bool random_states = false;  // seeded sampler instead of the uniform grid
    unsigned long seed = 12345;
    int sample_count = 200;

    // coupling inhomogeneity grid
    double c_min = 0.95, c_max = 1.05;
    int c_count = 11;
    double d_factor_min = 0.95, d_factor_max = 1.05;
    int d_factor_count = 11;

    int workers = 1;

    static SweepSpec from_config(const RunConfig& config, SweepKind kind);
    void validate() const;
};

/// One evaluated grid point. x1/x2 are the swept coordinates of the kind
/// (D and kappa^-1; gamma and theta; c and d; n_ph and dt).
struct SweepRow {
    double x1 = 0.0;
    double x2 = 0.0;
    double fidelity = 0.0;
    double lambda_ratio = 0.0;
    double t1_ns = 0.0;
    double t2_ns = 0.0;
    double peak_photon = 0.0;
    double min_eigenvalue = 0.0;
    double max_trace_error = 0.0;
};

struct SweepResult {
    SweepKind kind = SweepKind::detuning;
    std::vector<std::string> columns;
    std::vector<SweepRow> rows;
    double min_fidelity = 0.0;
    double mean_fidelity = 0.0;
    double max_fidelity = 0.0;
    RunConfig provenance;
    std::vector<std::string> notes;

    void finalize_summary();
};

/// Fidelity versus D = delta/g for each configured kappa^-1. g (and with it
/// mu and g_ab) tracks D at fixed delta, Delta.
SweepResult sweep_detuning(const SweepSpec& spec);

/// Fidelity over the (gamma, theta) input-state grid at the base D and kappa.
SweepResult sweep_state_grid(const SweepSpec& spec);

/// Fidelity over the (c, d) coupling-inhomogeneity grid, uniform input state.
SweepResult sweep_coupling(const SweepSpec& spec);

/// Fidelity versus photon truncation (n_ph in {2,3,4}) and versus time step
/// (dt in {2, 1, 0.5} ps) at the reference point.
SweepResult convergence_study(const SweepSpec& spec);

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;
};

/// Paper-number-free invariant suite: dark ground state, pi-pulse sign flip,
/// analytic stage-1 oracle, unitary consistency and the convergence
/// thresholds. Used by the `validate` subcommand.
std::vector<CheckResult> validation_suite(const RunConfig& config);

}  // namespace qst
