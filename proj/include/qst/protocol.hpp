#pragma once

#include <optional>

#include "qst/lindblad.hpp"

namespace qst {

/// Timing and rates of the two-stage transfer. Stage 1 swaps both excited
/// amplitudes to qutrit 2 through the virtually populated resonators; stage 2
/// is the resonant pi pulse that removes the swap's minus signs.
struct ProtocolSchedule {
    double lambda1 = 0.0;  // e-channel exchange rate, rad/ns
    double lambda2 = 0.0;  // f-channel exchange rate, rad/ns
    double lambda = 0.0;   // rate defining t1 (= lambda1)
    double t1 = 0.0;       // ns, pi / (2 lambda)
    double t2 = 0.0;       // ns, pi / Omega

    double mismatch_ratio() const { return lambda2 / lambda1; }
    double total_time() const { return t1 + t2; }
};

ProtocolSchedule build_schedule(const DeviceParams& params);

/// (alpha|g> + beta|e> + gamma|f>)_1 |g>_2 |0>_a |0>_b as a pure density matrix.
DensityMatrix initial_state(const InitialStateSpec& spec, const SpaceLayout& layout);
KetVector initial_ket(const InitialStateSpec& spec, const SpaceLayout& layout);

/// |g>_1 (alpha|g> + beta|e> + gamma|f>)_2 |0>_a |0>_b, no extra phases.
KetVector ideal_target(const InitialStateSpec& spec, const SpaceLayout& layout);

/// Closed-form stage-1 state of the matched-rate effective model at time t,
/// including the Stark-shift phase exp(-i lambda t) on the excited amplitudes.
KetVector analytic_stage1_state(const InitialStateSpec& spec, double lambda, double t,
                                const SpaceLayout& layout);

enum class Stage1Kind { full, effective_full, effective_reduced };

struct TransferOptions {
    bool include_crosstalk = true;
    Stage1Kind stage1 = Stage1Kind::full;
    /// Schrodinger propagation instead of the master equation; requires all
    /// decoherence rates zero.
    bool pure_state = false;
    /// Run with these stage times instead of deriving them from params. Used
    /// when the device deviates from the design the pulses were timed for
    /// (coupling-inhomogeneity studies).
    std::optional<ProtocolSchedule> schedule;
};

struct TransferResult {
    double fidelity = 0.0;  // sqrt(<psi_id| rho |psi_id>)
    DensityMatrix final_state;
    TrajectoryRecord stage1;
    TrajectoryRecord stage2;
    ProtocolSchedule schedule;
    double q_a = 0.0;  // omega_a / kappa_a
    double q_b = 0.0;
    double peak_photon = 0.0;  // max over sampled t of <n_a> + <n_b>
};

/// Executes the protocol: stage 1 for t1, then stage 2 for t2 on a continuous
/// clock, both under the master equation with every channel active.
TransferResult run_transfer(const InitialStateSpec& spec, const DeviceParams& params,
                            const DecoherenceRates& rates, const IntegratorConfig& config,
                            const SpaceLayout& layout, const TransferOptions& options = {});

}  // namespace qst
