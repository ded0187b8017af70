#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "qst/device.hpp"

using namespace qst;

namespace {

DeviceParams reference_device() {
    return DeviceParams::from_frequencies(2.5, 8.0, 1.0, 0.8, 10.0, 100.0, 0.1);
}

}  // namespace

TEST_CASE("unit conversion is angular") {
    const DeviceParams p = reference_device();
    CHECK(angular_to_ghz(p.w_a) == doctest::Approx(2.5));
    CHECK(angular_to_ghz(p.w_b) == doctest::Approx(8.0));
    CHECK(angular_to_ghz(p.w_eg[0]) == doctest::Approx(3.5));
    CHECK(angular_to_ghz(p.w_fg[0]) == doctest::Approx(8.8));
    CHECK(angular_to_mhz(p.g[0]) == doctest::Approx(100.0));
    CHECK(angular_to_mhz(p.g_ab) == doctest::Approx(10.0));
    CHECK(angular_to_mhz(p.omega_rabi) == doctest::Approx(100.0));
    CHECK(p.delta(0) == doctest::Approx(two_pi * 1.0));
    CHECK(p.Delta(1) == doctest::Approx(two_pi * 0.8));
    CHECK(p.delta_ab() == doctest::Approx(two_pi * 5.5));
}

TEST_CASE("constraint solver, both modes") {
    const DeviceParams base = reference_device();

    const DeviceParams strict = solve_constraints(base, ConstraintMode::strict_eq10);
    CHECK(angular_to_mhz(strict.mu[0]) == doctest::Approx(100.0 * std::sqrt(0.8)).epsilon(1e-12));
    CHECK(strict.mu[0] == strict.mu[1]);
    CHECK(strict.g[0] == strict.g[1]);
    // matched exchange rates to machine precision
    CHECK(std::abs(strict.lambda1() - strict.lambda2()) <= 1e-14 * strict.lambda1());

    const DeviceParams literal = solve_constraints(base, ConstraintMode::paper_literal);
    CHECK(angular_to_mhz(literal.mu[0]) == doctest::Approx(80.0).epsilon(1e-12));
    CHECK(literal.lambda2() / literal.lambda1() == doctest::Approx(0.8).epsilon(1e-12));

    // delta == Delta collapses both modes to mu = g
    DeviceParams symmetric = DeviceParams::from_frequencies(2.5, 8.0, 1.0, 1.0, 10.0, 100.0, 0.0);
    for (ConstraintMode mode : {ConstraintMode::strict_eq10, ConstraintMode::paper_literal}) {
        const DeviceParams solved = solve_constraints(symmetric, mode);
        CHECK(solved.mu[0] == doctest::Approx(solved.g[0]).epsilon(1e-15));
    }
}

TEST_CASE("exchange rates at the reference point") {
    const DeviceParams p = solve_constraints(reference_device(), ConstraintMode::strict_eq10);
    CHECK(angular_to_mhz(p.lambda1()) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(angular_to_mhz(p.lambda2()) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("inhomogeneity factors") {
    DeviceParams p = solve_constraints(reference_device(), ConstraintMode::strict_eq10);
    p.apply_inhomogeneity(0.95, 1.05);
    CHECK(p.g[1] == doctest::Approx(0.95 * p.g[0]));
    CHECK(p.mu[1] == doctest::Approx(1.05 * p.mu[0]));
    CHECK_THROWS_AS(p.apply_inhomogeneity(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("device validation") {
    CHECK_THROWS_AS(DeviceParams::from_frequencies(2.5, 8.0, 1.0, 0.8, 0.5, 100.0, 0.1),
                    std::invalid_argument);
    DeviceParams p = reference_device();
    p.w_eg[0] = p.w_a - 1.0;  // negative detuning
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("decoherence rates from lifetimes") {
    const DecoherenceRates r = DecoherenceRates::from_lifetimes_us(0.1, 5.0, 2.0);
    CHECK(r.kappa_a == doctest::Approx(0.01));  // 1/ns
    CHECK(r.gamma_eg[0] == doctest::Approx(0.0002));
    CHECK(r.gamma_phi_f[1] == doctest::Approx(0.0005));
    CHECK_FALSE(r.all_zero());

    const DecoherenceRates unitary{};
    CHECK(unitary.all_zero());

    const double inf = std::numeric_limits<double>::infinity();
    const DecoherenceRates lossless = DecoherenceRates::from_lifetimes_us(inf, inf, inf);
    CHECK(lossless.all_zero());

    DecoherenceRates bad{};
    bad.kappa_a = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("initial state spec") {
    const InitialStateSpec uniform = InitialStateSpec::uniform();
    CHECK(uniform.norm() == doctest::Approx(1.0).epsilon(1e-14));
    uniform.validate();

    // theta parameterization identities
    const InitialStateSpec s = InitialStateSpec::from_theta(0.0, std::numbers::pi / 2.0);
    CHECK(s.alpha.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(s.beta) < 1e-14);
    CHECK(std::abs(s.gamma) == 0.0);
    s.validate();

    InitialStateSpec bad{0.9, 0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(InitialStateSpec::from_theta(1.5, 0.0), std::invalid_argument);
}
