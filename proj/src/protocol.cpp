#include "qst/protocol.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qst {

namespace {
constexpr double pi = std::numbers::pi;
}

ProtocolSchedule build_schedule(const DeviceParams& params) {
    ProtocolSchedule s;
    s.lambda1 = params.lambda1();
    s.lambda2 = params.lambda2();
    if (!(s.lambda1 > 0)) throw std::invalid_argument("build_schedule: lambda1 must be positive");
    if (!(params.omega_rabi > 0))
        throw std::invalid_argument("build_schedule: Omega must be positive");
    // lambda = lambda1 keeps the e-channel swap exact; a lambda2 mismatch shows
    // up as an incomplete f swap and is reported, not hidden.
    s.lambda = s.lambda1;
    s.t1 = 0.5 * pi / s.lambda;
    s.t2 = pi / params.omega_rabi;
    return s;
}

KetVector initial_ket(const InitialStateSpec& spec, const SpaceLayout& layout) {
    spec.validate();
    ComplexVector v = ComplexVector::Zero(layout.dim());
    v(layout.index(Level::g, Level::g, 0, 0)) = spec.alpha;
    v(layout.index(Level::e, Level::g, 0, 0)) = spec.beta;
    v(layout.index(Level::f, Level::g, 0, 0)) = spec.gamma;
    return KetVector(std::move(v));
}

DensityMatrix initial_state(const InitialStateSpec& spec, const SpaceLayout& layout) {
    return DensityMatrix::from_ket(initial_ket(spec, layout));
}

KetVector ideal_target(const InitialStateSpec& spec, const SpaceLayout& layout) {
    spec.validate();
    ComplexVector v = ComplexVector::Zero(layout.dim());
    v(layout.index(Level::g, Level::g, 0, 0)) = spec.alpha;
    v(layout.index(Level::g, Level::e, 0, 0)) = spec.beta;
    v(layout.index(Level::g, Level::f, 0, 0)) = spec.gamma;
    return KetVector(std::move(v));
}

KetVector analytic_stage1_state(const InitialStateSpec& spec, double lambda, double t,
                                const SpaceLayout& layout) {
    spec.validate();
    const Complex phase = std::polar(1.0, -lambda * t);
    const Complex stay = phase * std::cos(lambda * t);
    const Complex hop = Complex(0.0, -1.0) * phase * std::sin(lambda * t);
    ComplexVector v = ComplexVector::Zero(layout.dim());
    v(layout.index(Level::g, Level::g, 0, 0)) = spec.alpha;
    v(layout.index(Level::e, Level::g, 0, 0)) = spec.beta * stay;
    v(layout.index(Level::g, Level::e, 0, 0)) = spec.beta * hop;
    v(layout.index(Level::f, Level::g, 0, 0)) = spec.gamma * stay;
    v(layout.index(Level::g, Level::f, 0, 0)) = spec.gamma * hop;
    return KetVector(std::move(v));
}

namespace {

HamiltonianModel stage1_for(const TransferOptions& options, const DeviceParams& params,
                            const SpaceLayout& layout) {
    switch (options.stage1) {
        case Stage1Kind::full: return stage1_model(params, layout, options.include_crosstalk);
        case Stage1Kind::effective_full: return effective_full_model(params, layout);
        case Stage1Kind::effective_reduced: return effective_reduced_model(params, layout);
    }
    throw std::logic_error("unreachable");
}

SamplePoint pure_sample(double t, const KetVector& psi, const SpaceLayout& layout) {
    SamplePoint s;
    s.t = t;
    s.trace_error = std::abs(psi.norm() - 1.0);
    for (int q1 = 0; q1 < 3; ++q1)
        for (int q2 = 0; q2 < 3; ++q2)
            for (int na = 0; na < layout.n_ph; ++na)
                for (int nb = 0; nb < layout.n_ph; ++nb) {
                    const double p = std::norm(psi.amplitudes(layout.index(q1, q2, na, nb)));
                    s.n_a += na * p;
                    s.n_b += nb * p;
                    s.pop_q1[q1] += p;
                    s.pop_q2[q2] += p;
                }
    return s;
}

}  // namespace

TransferResult run_transfer(const InitialStateSpec& spec, const DeviceParams& params,
                            const DecoherenceRates& rates, const IntegratorConfig& config,
                            const SpaceLayout& layout, const TransferOptions& options) {
    params.validate();
    rates.validate();

    TransferResult result;
    result.schedule = options.schedule ? *options.schedule : build_schedule(params);
    const double t1 = result.schedule.t1;
    const double t2 = result.schedule.t2;

    const HamiltonianModel h1 = stage1_for(options, params, layout);
    const HamiltonianModel h2 = stage2_model(params, layout, options.include_crosstalk);
    const KetVector target = ideal_target(spec, layout);

    if (options.pure_state) {
        if (!rates.all_zero())
            throw std::invalid_argument(
                "run_transfer: pure-state mode requires all decoherence rates zero");
        const KetVector psi0 = initial_ket(spec, layout);
        const KetVector psi1 = evolve_pure(psi0, h1, 0.0, t1, config);
        const KetVector psi2 = evolve_pure(psi1, h2, t1, t2, config);
        result.stage1.samples = {pure_sample(0.0, psi0, layout), pure_sample(t1, psi1, layout)};
        result.stage2.samples = {pure_sample(t1 + t2, psi2, layout)};
        result.final_state = DensityMatrix::from_ket(psi2);
        result.fidelity = fidelity(target, psi2);
    } else {
        const std::vector<CollapseChannel> channels = collapse_operators(rates, layout);
        const DensityMatrix rho0 = initial_state(spec, layout);
        result.stage1 = evolve(rho0, h1, channels, 0.0, t1, config);
        result.stage2 = evolve(result.stage1.final_state, h2, channels, t1, t2, config);
        result.final_state = result.stage2.final_state;
        result.fidelity = fidelity(target, result.final_state);
    }

    const double inf = std::numeric_limits<double>::infinity();
    result.q_a = rates.kappa_a > 0 ? params.w_a / rates.kappa_a : inf;
    result.q_b = rates.kappa_b > 0 ? params.w_b / rates.kappa_b : inf;
    result.peak_photon =
        std::max(result.stage1.max_total_photon(), result.stage2.max_total_photon());
    return result;
}

}  // namespace qst
