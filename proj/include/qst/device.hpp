#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>

namespace qst {

// Unit policy: configuration carries ordinary frequencies nu (GHz / MHz) and
// lifetimes (us); everything internal is angular (rad/ns) with times in ns.
// The conversion happens exactly once, in the from_* builders below.
inline constexpr double two_pi = 6.283185307179586476925286766559;
inline double ghz_to_angular(double nu_ghz) { return two_pi * nu_ghz; }
inline double mhz_to_angular(double nu_mhz) { return two_pi * nu_mhz * 1e-3; }
inline double angular_to_ghz(double w) { return w / two_pi; }
inline double angular_to_mhz(double w) { return 1e3 * w / two_pi; }
inline double inv_us_to_inv_ns(double r) { return r * 1e-3; }
inline double lifetime_us_to_rate(double t_us) { return t_us > 0 ? 1e-3 / t_us : 0.0; }

/// How the f-channel coupling mu is derived from g, delta and Delta. The two
/// readings disagree: matching the exchange rates exactly needs
/// mu = g*sqrt(Delta/delta), while the quoted device values correspond to
/// mu = g*Delta/delta. Both are first-class so experiments can compare them.
enum class ConstraintMode { strict_eq10, paper_literal };

const char* to_string(ConstraintMode mode);
std::optional<ConstraintMode> constraint_mode_from_string(const std::string& s);

/// Physical device parameters, stored angular (rad/ns). Index 0/1 = qutrit 1/2.
struct DeviceParams {
    double w_eg[2]{};   // |g>-|e> transition frequency
    double w_fg[2]{};   // |g>-|f> transition frequency
    double w_a = 0.0;   // resonator a
    double w_b = 0.0;   // resonator b
    double g[2]{};      // qutrit-resonator-a coupling
    double mu[2]{};     // qutrit-resonator-b coupling
    double g_ab = 0.0;  // inter-resonator crosstalk coupling
    double omega_rabi = 0.0;  // stage-2 drive Rabi frequency

    std::optional<ConstraintMode> solved_mode;  // set by solve_constraints

    double delta(int j) const { return w_eg[j] - w_a; }
    double Delta(int j) const { return w_fg[j] - w_b; }
    double delta_ab() const { return w_b - w_a; }

    /// Resonator-mediated exchange rates of the dispersive model.
    double lambda1() const { return 0.5 * g[0] * g[1] * (1.0 / delta(0) + 1.0 / delta(1)); }
    double lambda2() const { return 0.5 * mu[0] * mu[1] * (1.0 / Delta(0) + 1.0 / Delta(1)); }

    /// Identical-qutrit device from ordinary-frequency inputs. g is set from
    /// the detuning ratio D = delta/g; mu is left for solve_constraints.
    static DeviceParams from_frequencies(double nu_a_ghz, double nu_b_ghz, double delta_ghz,
                                         double big_delta_ghz, double detuning_ratio,
                                         double omega_rabi_mhz, double crosstalk_ratio);

    /// Multiplies qutrit-2 couplings: g2 = c*g1, mu2 = d*mu1. Applied after
    /// constraint solving.
    void apply_inhomogeneity(double c, double d);

    /// Positive frequencies and dispersive-sign detunings (delta_j, Delta_j > 0).
    void validate() const;
};

/// Returns params with mu fixed by the selected mode and g_1 = g_2, mu_1 = mu_2.
DeviceParams solve_constraints(const DeviceParams& params, ConstraintMode mode);

/// All decoherence rates, 1/ns. Zero rates are permitted (unitary limit).
struct DecoherenceRates {
    double kappa_a = 0.0;
    double kappa_b = 0.0;
    double gamma_eg[2]{};     // |e> -> |g| relaxation
    double gamma_fe[2]{};     // |f> -> |e>
    double gamma_fg[2]{};     // |f> -> |g>
    double gamma_phi_e[2]{};  // |e> dephasing
    double gamma_phi_f[2]{};  // |f> dephasing

    static DecoherenceRates from_lifetimes_us(double kappa_inv_us, double gamma_relax_inv_us,
                                              double gamma_phi_inv_us);

    bool all_zero() const;
    void validate() const;  // all rates >= 0
};

/// Qutrit-1 input state amplitudes (alpha, beta, gamma) on (g, e, f).
struct InitialStateSpec {
    std::complex<double> alpha{1.0, 0.0};
    std::complex<double> beta{0.0, 0.0};
    std::complex<double> gamma{0.0, 0.0};

    /// alpha = sqrt(1-gamma^2) sin(theta), beta = sqrt(1-gamma^2) cos(theta).
    static InitialStateSpec from_theta(double gamma_coef, double theta);
    static InitialStateSpec uniform();  // alpha = beta = gamma = 1/sqrt(3)

    double norm() const;
    void validate(double tol = 1e-10) const;
};

}  // namespace qst
