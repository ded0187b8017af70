#include "qst/device.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qst {

const char* to_string(ConstraintMode mode) {
    return mode == ConstraintMode::strict_eq10 ? "strict_eq10" : "paper_literal";
}

std::optional<ConstraintMode> constraint_mode_from_string(const std::string& s) {
    if (s == "strict_eq10") return ConstraintMode::strict_eq10;
    if (s == "paper_literal") return ConstraintMode::paper_literal;
    return std::nullopt;
}

DeviceParams DeviceParams::from_frequencies(double nu_a_ghz, double nu_b_ghz, double delta_ghz,
                                            double big_delta_ghz, double detuning_ratio,
                                            double omega_rabi_mhz, double crosstalk_ratio) {
    if (detuning_ratio <= 1.0)
        throw std::invalid_argument("DeviceParams: detuning ratio D must exceed 1");
    DeviceParams p;
    p.w_a = ghz_to_angular(nu_a_ghz);
    p.w_b = ghz_to_angular(nu_b_ghz);
    const double delta = ghz_to_angular(delta_ghz);
    const double Delta = ghz_to_angular(big_delta_ghz);
    for (int j = 0; j < 2; ++j) {
        p.w_eg[j] = p.w_a + delta;
        p.w_fg[j] = p.w_b + Delta;
        p.g[j] = delta / detuning_ratio;
    }
    p.g_ab = crosstalk_ratio * p.g[0];
    p.omega_rabi = mhz_to_angular(omega_rabi_mhz);
    p.validate();
    return p;
}

void DeviceParams::apply_inhomogeneity(double c, double d) {
    if (c <= 0 || d <= 0)
        throw std::invalid_argument("DeviceParams: inhomogeneity factors must be positive");
    g[1] = c * g[0];
    mu[1] = d * mu[0];
}

void DeviceParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0)) {
            std::ostringstream msg;
            msg << "DeviceParams: " << name << " must be positive (got " << v << ")";
            throw std::invalid_argument(msg.str());
        }
    };
    positive(w_a, "w_a");
    positive(w_b, "w_b");
    for (int j = 0; j < 2; ++j) {
        positive(w_eg[j], "w_eg");
        positive(w_fg[j], "w_fg");
        positive(delta(j), "delta_j (dispersive regime)");
        positive(Delta(j), "Delta_j (dispersive regime)");
    }
}

DeviceParams solve_constraints(const DeviceParams& params, ConstraintMode mode) {
    DeviceParams out = params;
    const double delta = params.delta(0);
    const double Delta = params.Delta(0);
    if (!(delta > 0) || !(Delta > 0))
        throw std::invalid_argument("solve_constraints: detunings must be positive");
    out.g[0] = out.g[1] = params.g[0];
    const double ratio = Delta / delta;
    const double mu =
        (mode == ConstraintMode::strict_eq10) ? params.g[0] * std::sqrt(ratio) : params.g[0] * ratio;
    out.mu[0] = out.mu[1] = mu;
    out.solved_mode = mode;
    return out;
}

DecoherenceRates DecoherenceRates::from_lifetimes_us(double kappa_inv_us,
                                                     double gamma_relax_inv_us,
                                                     double gamma_phi_inv_us) {
    DecoherenceRates r;
    r.kappa_a = r.kappa_b = lifetime_us_to_rate(kappa_inv_us);
    for (int j = 0; j < 2; ++j) {
        r.gamma_eg[j] = r.gamma_fe[j] = r.gamma_fg[j] = lifetime_us_to_rate(gamma_relax_inv_us);
        r.gamma_phi_e[j] = r.gamma_phi_f[j] = lifetime_us_to_rate(gamma_phi_inv_us);
    }
    r.validate();
    return r;
}

bool DecoherenceRates::all_zero() const {
    double sum = kappa_a + kappa_b;
    for (int j = 0; j < 2; ++j)
        sum += gamma_eg[j] + gamma_fe[j] + gamma_fg[j] + gamma_phi_e[j] + gamma_phi_f[j];
    return sum == 0.0;
}

void DecoherenceRates::validate() const {
    auto check = [](double v, const char* name) {
        if (v < 0 || !std::isfinite(v))
            throw std::invalid_argument(std::string("DecoherenceRates: ") + name +
                                        " must be finite and >= 0");
    };
    check(kappa_a, "kappa_a");
    check(kappa_b, "kappa_b");
    for (int j = 0; j < 2; ++j) {
        check(gamma_eg[j], "gamma_eg");
        check(gamma_fe[j], "gamma_fe");
        check(gamma_fg[j], "gamma_fg");
        check(gamma_phi_e[j], "gamma_phi_e");
        check(gamma_phi_f[j], "gamma_phi_f");
    }
}

InitialStateSpec InitialStateSpec::from_theta(double gamma_coef, double theta) {
    if (gamma_coef < 0 || gamma_coef > 1)
        throw std::invalid_argument("InitialStateSpec: gamma must lie in [0, 1]");
    const double r = std::sqrt(1.0 - gamma_coef * gamma_coef);
    InitialStateSpec s;
    s.alpha = r * std::sin(theta);
    s.beta = r * std::cos(theta);
    s.gamma = gamma_coef;
    return s;
}

InitialStateSpec InitialStateSpec::uniform() {
    const double a = 1.0 / std::sqrt(3.0);
    return InitialStateSpec{a, a, a};
}

double InitialStateSpec::norm() const {
    return std::sqrt(std::norm(alpha) + std::norm(beta) + std::norm(gamma));
}

void InitialStateSpec::validate(double tol) const {
    const double n = norm();
    if (std::abs(n - 1.0) > tol) {
        std::ostringstream msg;
        msg << "InitialStateSpec: |alpha|^2+|beta|^2+|gamma|^2 = " << n * n
            << " is not normalized within " << tol;
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace qst
