#pragma once

#include <functional>
#include <vector>

#include "qst/hamiltonian.hpp"
#include "qst/states.hpp"

namespace qst {

enum class StepMethod { rk4_fixed, rk4_step_doubling };

struct IntegratorConfig {
    double dt = 1e-3;  // ns; 1 ps resolves the fastest crosstalk oscillation
    StepMethod method = StepMethod::rk4_fixed;
    double local_tolerance = 1e-10;  // step-doubling mode only
    long max_steps = 20'000'000;
    int record_stride = 200;      // diagnostics every this many accepted steps
    bool spectrum_checks = true;  // min-eigenvalue estimate at recorded points

    void validate() const;
};

struct SamplePoint {
    double t = 0.0;
    double trace_error = 0.0;   // |Tr rho - 1|
    double min_eigenvalue = 0.0;
    double n_a = 0.0;           // <a^dag a>
    double n_b = 0.0;
    double pop_q1[3]{};         // qutrit-1 (g, e, f) populations
    double pop_q2[3]{};
};

struct TrajectoryRecord {
    std::vector<SamplePoint> samples;
    DensityMatrix final_state;
    long steps = 0;
    double dt_used = 0.0;

    double max_trace_error() const;
    double min_eigenvalue() const;
    double max_total_photon() const;  // max over samples of n_a + n_b
};

/// Right-hand side of the master equation at time t: the Hamiltonian
/// commutator plus all dissipator channels. Reference implementation; the
/// propagator used by evolve() is checked against it.
ComplexMatrix lindblad_rhs(double t, const DensityMatrix& rho, const HamiltonianModel& h,
                           const std::vector<CollapseChannel>& channels);

/// Master-equation propagation over [t0, t0 + duration]. Enforces Hermitian
/// symmetrization every step and aborts if |Tr rho - 1| exceeds 1e-6.
TrajectoryRecord evolve(const DensityMatrix& rho0, const HamiltonianModel& h,
                        const std::vector<CollapseChannel>& channels, double t0, double duration,
                        const IntegratorConfig& config);

/// Same contract with the Hamiltonian supplied as a plain callable. Slower
/// path (dense assembly per stage evaluation); intended for tests and
/// non-standard Hamiltonians.
TrajectoryRecord evolve(const DensityMatrix& rho0,
                        const std::function<ComplexMatrix(double)>& h_builder,
                        const std::vector<CollapseChannel>& channels, double t0, double duration,
                        const IntegratorConfig& config);

/// Schrodinger propagation of a pure state; only valid in the lossless limit.
KetVector evolve_pure(const KetVector& psi0, const HamiltonianModel& h, double t0, double duration,
                      const IntegratorConfig& config);

}  // namespace qst
