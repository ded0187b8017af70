#pragma once

#include <string>
#include <vector>

#include "qst/device.hpp"
#include "qst/operators.hpp"

namespace qst {

/// One term of an interaction-picture Hamiltonian:
///   amp * exp(i * freq * t) * op   [+ h.c. if add_adjoint]
/// Standalone terms (add_adjoint = false) must be Hermitian with real amp and
/// freq = 0 so that the assembled matrix stays Hermitian.
struct HamiltonianTerm {
    ComplexMatrix op;
    Complex amp;
    double freq = 0.0;  // rad/ns
    bool add_adjoint = true;
};

/// A time-dependent Hamiltonian as a fixed list of oscillating terms. The
/// operators are built once; evaluation only rescales them.
struct HamiltonianModel {
    SpaceLayout layout;
    std::vector<HamiltonianTerm> terms;

    explicit HamiltonianModel(const SpaceLayout& l) : layout(l) {}

    void evaluate(double t, ComplexMatrix& h) const;
    ComplexMatrix at(double t) const;

    /// Largest oscillation frequency present, as an ordinary frequency (GHz).
    /// Used for the integrator step-size guard.
    double max_oscillation_ghz() const;
};

/// Stage-1 Hamiltonian: qutrit-resonator exchange for the e- and f-channels,
/// optionally with the inter-resonator crosstalk term.
HamiltonianModel stage1_model(const DeviceParams& params, const SpaceLayout& layout,
                              bool include_crosstalk);

/// Stage-2 Hamiltonian: resonant e-f drive on qutrit 2 (qutrits detuned away
/// from both resonators), optionally with the crosstalk term.
HamiltonianModel stage2_model(const DeviceParams& params, const SpaceLayout& layout,
                              bool include_crosstalk);

/// Full second-order effective Hamiltonian: Stark shifts, the two-photon
/// f-e cross terms and the resonator-mediated qutrit-qutrit exchange.
/// Time-dependent unless the detunings are matched pairwise.
HamiltonianModel effective_full_model(const DeviceParams& params, const SpaceLayout& layout);

/// Two-qutrit exchange at a single rate lambda, identity on the resonators.
/// Requires lambda1 == lambda2 within 1e-12 relative (strict_eq10 regime).
HamiltonianModel effective_reduced_model(const DeviceParams& params, const SpaceLayout& layout);

// Spec-shaped one-shot builders (model construction + evaluation).
ComplexMatrix h_stage1(double t, const DeviceParams& params, const SpaceLayout& layout,
                       bool include_crosstalk);
ComplexMatrix h_stage2(double t, const DeviceParams& params, const SpaceLayout& layout,
                       bool include_crosstalk);
ComplexMatrix h_effective_full(double t, const DeviceParams& params, const SpaceLayout& layout);
ComplexMatrix h_effective_reduced(const DeviceParams& params, const SpaceLayout& layout);

enum class ChannelKind { lowering, dephasing };

struct CollapseChannel {
    ComplexMatrix op;
    double rate;  // 1/ns
    ChannelKind kind;
    std::string label;
};

/// The dissipator channels of the master equation: photon decay for both
/// resonators, three relaxation paths per qutrit, and the projector-type
/// dephasing channels. Channels with zero rate are dropped.
std::vector<CollapseChannel> collapse_operators(const DecoherenceRates& rates,
                                                const SpaceLayout& layout);

}  // namespace qst
