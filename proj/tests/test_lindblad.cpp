#include <numbers>
#include <random>

#include "doctest.h"
#include "qst/lindblad.hpp"
#include "qst/protocol.hpp"

using namespace qst;

namespace {

DeviceParams reference_device() {
    return solve_constraints(DeviceParams::from_frequencies(2.5, 8.0, 1.0, 0.8, 10.0, 100.0, 0.1),
                             ConstraintMode::strict_eq10);
}

DecoherenceRates reference_rates() { return DecoherenceRates::from_lifetimes_us(0.1, 5.0, 2.0); }

/// Random full-rank physical state: rho = A A^dag / Tr(A A^dag).
DensityMatrix random_density(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    ComplexMatrix a(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) a(i, j) = Complex(dist(rng), dist(rng));
    ComplexMatrix rho = a * a.adjoint();
    rho /= rho.trace();
    return DensityMatrix(std::move(rho));
}

}  // namespace

TEST_CASE("rhs is zero without Hamiltonian and channels") {
    const SpaceLayout layout(2);
    const HamiltonianModel h(layout);
    const DensityMatrix rho = random_density(layout.dim(), 5);
    CHECK(lindblad_rhs(0.0, rho, h, {}).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ground-vacuum state is dark under the full dissipator") {
    const SpaceLayout layout(3);
    const DensityMatrix rho =
        DensityMatrix::from_ket(basis_state(layout, Level::g, Level::g, 0, 0));
    const HamiltonianModel h = stage1_model(reference_device(), layout, true);
    const auto channels = collapse_operators(reference_rates(), layout);
    // every channel annihilates it; the Hamiltonian couples it to nothing
    CHECK(lindblad_rhs(0.0, rho, h, channels).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("rhs posts: Hermitian and traceless") {
    const SpaceLayout layout(3);
    const DensityMatrix rho = random_density(layout.dim(), 17);
    const HamiltonianModel h = stage1_model(reference_device(), layout, true);
    const auto channels = collapse_operators(reference_rates(), layout);
    const ComplexMatrix rhs = lindblad_rhs(0.42, rho, h, channels);
    CHECK(std::abs(rhs.trace()) < 1e-12 * layout.dim());
    CHECK((rhs - rhs.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single decay channel drains the photon number at rate kappa") {
    const SpaceLayout layout(3);
    const DensityMatrix rho =
        DensityMatrix::from_ket(basis_state(layout, Level::g, Level::g, 1, 0));
    const HamiltonianModel h(layout);
    DecoherenceRates rates{};
    rates.kappa_a = 0.01;
    const auto channels = collapse_operators(rates, layout);
    const ComplexMatrix rhs = lindblad_rhs(0.0, rho, h, channels);
    const ComplexMatrix n_a =
        embed(annihilation(3).adjoint() * annihilation(3), Factor::res_a, layout);
    const double dn_dt = (n_a * rhs).trace().real();
    CHECK(dn_dt == doctest::Approx(-rates.kappa_a).epsilon(1e-12));
}

TEST_CASE("evolve with zero generator is the identity") {
    const SpaceLayout layout(2);
    const DensityMatrix rho = random_density(layout.dim(), 23);
    const HamiltonianModel h(layout);
    IntegratorConfig config;
    config.dt = 0.01;
    const TrajectoryRecord rec = evolve(rho, h, {}, 0.0, 1.0, config);
    CHECK((rec.final_state.matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pure photon decay follows the exponential law") {
    const SpaceLayout layout(3);
    const DensityMatrix rho =
        DensityMatrix::from_ket(basis_state(layout, Level::g, Level::g, 1, 0));
    const HamiltonianModel h(layout);
    DecoherenceRates rates{};
    rates.kappa_a = 0.1;  // 1/ns so t = 1/kappa stays cheap
    IntegratorConfig config;
    const TrajectoryRecord rec =
        evolve(rho, h, collapse_operators(rates, layout), 0.0, 1.0 / rates.kappa_a, config);
    const ComplexMatrix n_a =
        embed(annihilation(3).adjoint() * annihilation(3), Factor::res_a, layout);
    const double population = expectation(n_a, rec.final_state).real();
    CHECK(std::abs(population - std::exp(-1.0)) / std::exp(-1.0) < 1e-6);
}

TEST_CASE("structured propagator matches the reference rhs") {
    // evolve() runs the structure-exploiting path; the plain-callable overload
    // assembles dense matrices. Same equation, same trajectory.
    const SpaceLayout layout(3);
    const DeviceParams params = reference_device();
    const HamiltonianModel model = stage1_model(params, layout, true);
    const auto channels = collapse_operators(reference_rates(), layout);
    const DensityMatrix rho0 = random_density(layout.dim(), 31);
    IntegratorConfig config;
    config.dt = 0.002;
    config.spectrum_checks = false;
    const double duration = 0.5;
    const TrajectoryRecord fast = evolve(rho0, model, channels, 0.0, duration, config);
    const TrajectoryRecord dense = evolve(
        rho0, [&](double t) { return model.at(t); }, channels, 0.0, duration, config);
    CHECK((fast.final_state.matrix() - dense.final_state.matrix()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("non-monomial channels fall back to the dense dissipator") {
    const SpaceLayout layout(2);
    std::mt19937 rng(7);
    std::normal_distribution<double> dist;
    ComplexMatrix op(layout.dim(), layout.dim());
    for (int j = 0; j < layout.dim(); ++j)
        for (int i = 0; i < layout.dim(); ++i) op(i, j) = Complex(dist(rng), dist(rng));
    op *= 0.05;
    const std::vector<CollapseChannel> channels{{op, 0.02, ChannelKind::lowering, "random"}};
    const DensityMatrix rho0 = random_density(layout.dim(), 41);
    const HamiltonianModel model = stage1_model(reference_device(), layout, false);
    IntegratorConfig config;
    config.dt = 0.002;
    config.spectrum_checks = false;
    const TrajectoryRecord fast = evolve(rho0, model, channels, 0.0, 0.3, config);
    const TrajectoryRecord dense = evolve(
        rho0, [&](double t) { return model.at(t); }, channels, 0.0, 0.3, config);
    CHECK((fast.final_state.matrix() - dense.final_state.matrix()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("dissipative trajectories stay physical") {
    const SpaceLayout layout(3);
    const InitialStateSpec spec = InitialStateSpec::uniform();
    const HamiltonianModel h = stage1_model(reference_device(), layout, true);
    const auto channels = collapse_operators(reference_rates(), layout);
    IntegratorConfig config;
    config.record_stride = 100;
    const TrajectoryRecord rec =
        evolve(initial_state(spec, layout), h, channels, 0.0, 3.0, config);
    CHECK(rec.max_trace_error() < 1e-8);
    CHECK(rec.min_eigenvalue() > -1e-7);
    CHECK(rec.final_state.purity() <= 1.0 + 1e-9);
    rec.final_state.validate(1e-10, 1e-8, 1e-7);
}

TEST_CASE("evolve_pure basics") {
    const SpaceLayout layout(2);
    const HamiltonianModel h(layout);
    const KetVector psi0 = basis_state(layout, Level::e, Level::g, 0, 0);
    IntegratorConfig config;
    config.dt = 0.01;
    const KetVector out = evolve_pure(psi0, h, 0.0, 1.0, config);
    CHECK((out.amplitudes - psi0.amplitudes).norm() == 0.0);
}

TEST_CASE("effective-model Rabi oscillation matches the closed form") {
    const SpaceLayout layout(2);
    const DeviceParams p = reference_device();
    const HamiltonianModel h = effective_reduced_model(p, layout);
    const double lambda = p.lambda1();
    IntegratorConfig config;

    KetVector psi = basis_state(layout, Level::e, Level::g, 0, 0);
    const int eg = layout.index(Level::e, Level::g, 0, 0);
    const int ge = layout.index(Level::g, Level::e, 0, 0);
    double t = 0.0;
    for (int k = 0; k < 5; ++k) {
        const double t_next = (k + 1) * 2.0;
        psi = evolve_pure(psi, h, t, t_next - t, config);
        t = t_next;
        // the reduced model omits the Stark shift, so amplitudes are the bare
        // cos/sin pair without the extra phase
        CHECK(std::abs(psi.amplitudes(eg) - Complex(std::cos(lambda * t))) < 1e-8);
        CHECK(std::abs(psi.amplitudes(ge) - Complex(0.0, -std::sin(lambda * t))) < 1e-8);
    }
}

TEST_CASE("norm is conserved over the full stage-1 duration") {
    const SpaceLayout layout(3);
    const DeviceParams p = reference_device();
    const HamiltonianModel h = stage1_model(p, layout, true);
    const KetVector psi0 = initial_ket(InitialStateSpec::uniform(), layout);
    IntegratorConfig config;
    const KetVector out = evolve_pure(psi0, h, 0.0, build_schedule(p).t1, config);
    CHECK(std::abs(out.norm() - 1.0) < 1e-10);
}

TEST_CASE("unitary consistency between density and pure propagation") {
    const SpaceLayout layout(2);
    const DeviceParams p = reference_device();
    const HamiltonianModel h = stage1_model(p, layout, true);
    const InitialStateSpec spec = InitialStateSpec::uniform();
    IntegratorConfig config;
    const double duration = 2.0;
    const KetVector psi = evolve_pure(initial_ket(spec, layout), h, 0.0, duration, config);
    const TrajectoryRecord rec = evolve(initial_state(spec, layout), h,
                                        std::vector<CollapseChannel>{}, 0.0, duration, config);
    const double overlap =
        (psi.amplitudes.adjoint() * rec.final_state.matrix() * psi.amplitudes)(0).real();
    CHECK(std::abs(overlap - 1.0) < 1e-7);
}

TEST_CASE("step-doubling integrator hits the fixed-step answer") {
    const SpaceLayout layout(2);
    const DeviceParams p = reference_device();
    const HamiltonianModel h = stage1_model(p, layout, false);
    const auto channels = collapse_operators(reference_rates(), layout);
    const DensityMatrix rho0 = initial_state(InitialStateSpec::uniform(), layout);

    IntegratorConfig fixed;
    fixed.dt = 0.0005;
    fixed.spectrum_checks = false;
    IntegratorConfig adaptive = fixed;
    adaptive.method = StepMethod::rk4_step_doubling;
    adaptive.dt = 0.002;
    adaptive.local_tolerance = 1e-11;

    const TrajectoryRecord a = evolve(rho0, h, channels, 0.0, 2.0, fixed);
    const TrajectoryRecord b = evolve(rho0, h, channels, 0.0, 2.0, adaptive);
    CHECK((a.final_state.matrix() - b.final_state.matrix()).cwiseAbs().maxCoeff() < 1e-7);
    CHECK(b.steps < a.steps);
}

TEST_CASE("integrator guard rails") {
    const SpaceLayout layout(2);
    const HamiltonianModel h = stage1_model(reference_device(), layout, false);
    const DensityMatrix rho0 = initial_state(InitialStateSpec::uniform(), layout);
    IntegratorConfig config;
    config.max_steps = 10;
    CHECK_THROWS_AS(evolve(rho0, h, {}, 0.0, 1.0, config), std::runtime_error);

    IntegratorConfig bad;
    bad.dt = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(evolve(rho0, h, {}, 0.0, -1.0, IntegratorConfig{}), std::invalid_argument);
}

TEST_CASE("trace drift aborts with a diagnostic") {
    // a Hamiltonian far beyond the RK4 stability limit (omega dt = 20) makes
    // the step diverge; the per-step trace guard must catch the blow-up
    const SpaceLayout layout(2);
    const DensityMatrix rho0 = initial_state(InitialStateSpec::uniform(), layout);
    ComplexMatrix stiff = ComplexMatrix::Zero(layout.dim(), layout.dim());
    stiff(0, 1) = stiff(1, 0) = 1e3;
    IntegratorConfig config;
    config.dt = 0.01;
    config.spectrum_checks = false;
    try {
        evolve(rho0, [&](double) { return stiff; }, {}, 0.0, 50.0, config);
        FAIL("expected trace-drift abort");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("trace drift") != std::string::npos);
    }
}
