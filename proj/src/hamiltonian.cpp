#include "qst/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace qst {

void HamiltonianModel::evaluate(double t, ComplexMatrix& h) const {
    const int d = layout.dim();
    if (h.rows() != d || h.cols() != d) h.resize(d, d);
    h.setZero();
    for (const auto& term : terms) {
        const Complex z = term.amp * std::polar(1.0, term.freq * t);
        h.noalias() += z * term.op;
        if (term.add_adjoint) h.noalias() += std::conj(z) * term.op.adjoint();
    }
}

ComplexMatrix HamiltonianModel::at(double t) const {
    ComplexMatrix h;
    evaluate(t, h);
    return h;
}

double HamiltonianModel::max_oscillation_ghz() const {
    double w = 0.0;
    for (const auto& term : terms) w = std::max(w, std::abs(term.freq));
    return angular_to_ghz(w);
}

namespace {

Factor qutrit_factor(int j) { return j == 0 ? Factor::qutrit1 : Factor::qutrit2; }

void append_crosstalk(HamiltonianModel& model, const DeviceParams& params,
                      const SpaceLayout& layout) {
    if (params.g_ab == 0.0) return;
    const ComplexMatrix a = annihilation(layout.n_ph);
    const ComplexMatrix b_dag = annihilation(layout.n_ph).adjoint();
    model.terms.push_back({embed_product(layout, {{Factor::res_a, &a}, {Factor::res_b, &b_dag}}),
                           params.g_ab, params.delta_ab(), true});
}

}  // namespace

HamiltonianModel stage1_model(const DeviceParams& params, const SpaceLayout& layout,
                              bool include_crosstalk) {
    HamiltonianModel model(layout);
    const ComplexMatrix a = annihilation(layout.n_ph);
    const ComplexMatrix raise_eg = qutrit_transition(Level::g, Level::e);
    const ComplexMatrix raise_fg = qutrit_transition(Level::g, Level::f);
    for (int j = 0; j < 2; ++j) {
        if (params.g[j] != 0.0)
            model.terms.push_back(
                {embed_product(layout, {{qutrit_factor(j), &raise_eg}, {Factor::res_a, &a}}),
                 params.g[j], params.delta(j), true});
        if (params.mu[j] != 0.0)
            model.terms.push_back(
                {embed_product(layout, {{qutrit_factor(j), &raise_fg}, {Factor::res_b, &a}}),
                 params.mu[j], params.Delta(j), true});
    }
    if (include_crosstalk) append_crosstalk(model, params, layout);
    return model;
}

HamiltonianModel stage2_model(const DeviceParams& params, const SpaceLayout& layout,
                              bool include_crosstalk) {
    HamiltonianModel model(layout);
    if (params.omega_rabi != 0.0) {
        const ComplexMatrix e_from_f = qutrit_transition(Level::f, Level::e);  // |e><f|
        model.terms.push_back({embed(e_from_f, Factor::qutrit2, layout), params.omega_rabi, 0.0, true});
    }
    if (include_crosstalk) append_crosstalk(model, params, layout);
    return model;
}

HamiltonianModel effective_full_model(const DeviceParams& params, const SpaceLayout& layout) {
    for (int j = 0; j < 2; ++j)
        if (params.delta(j) == 0.0 || params.Delta(j) == 0.0)
            throw std::invalid_argument("effective_full_model: zero detuning");

    HamiltonianModel model(layout);
    const ComplexMatrix a = annihilation(layout.n_ph);
    const ComplexMatrix a_dag = a.adjoint();
    const ComplexMatrix aa_dag = a * a_dag;
    const ComplexMatrix a_dag_a = a_dag * a;
    const ComplexMatrix proj_g = qutrit_transition(Level::g, Level::g);
    const ComplexMatrix proj_e = qutrit_transition(Level::e, Level::e);
    const ComplexMatrix proj_f = qutrit_transition(Level::f, Level::f);

    // Stark shifts, one Hermitian standalone term per product.
    for (int j = 0; j < 2; ++j) {
        const double se = params.g[j] * params.g[j] / params.delta(j);
        const double sf = params.mu[j] * params.mu[j] / params.Delta(j);
        model.terms.push_back(
            {embed_product(layout, {{qutrit_factor(j), &proj_e}, {Factor::res_a, &aa_dag}}),
             se, 0.0, false});
        model.terms.push_back(
            {embed_product(layout, {{qutrit_factor(j), &proj_g}, {Factor::res_a, &a_dag_a}}),
             -se, 0.0, false});
        model.terms.push_back(
            {embed_product(layout, {{qutrit_factor(j), &proj_f}, {Factor::res_b, &aa_dag}}),
             sf, 0.0, false});
        model.terms.push_back(
            {embed_product(layout, {{qutrit_factor(j), &proj_g}, {Factor::res_b, &a_dag_a}}),
             -sf, 0.0, false});
    }

    // Two-photon f-e cross terms: a^dag b sigma^+_fe,j exp(-i (delta_j - Delta_j) t).
    const ComplexMatrix raise_fe = qutrit_transition(Level::e, Level::f);  // |f><e|
    for (int j = 0; j < 2; ++j) {
        const double amp =
            0.5 * params.g[j] * params.mu[j] * (1.0 / params.delta(j) + 1.0 / params.Delta(j));
        model.terms.push_back({embed_product(layout, {{qutrit_factor(j), &raise_fe},
                                                      {Factor::res_a, &a_dag},
                                                      {Factor::res_b, &a}}),
                               amp, -(params.delta(j) - params.Delta(j)), true});
    }

    // Resonator-mediated exchange.
    const ComplexMatrix raise_eg = qutrit_transition(Level::g, Level::e);
    const ComplexMatrix lower_eg = qutrit_transition(Level::e, Level::g);
    const ComplexMatrix raise_fg = qutrit_transition(Level::g, Level::f);
    const ComplexMatrix lower_fg = qutrit_transition(Level::f, Level::g);
    model.terms.push_back(
        {embed_product(layout, {{Factor::qutrit1, &raise_eg}, {Factor::qutrit2, &lower_eg}}),
         params.lambda1(), params.delta(0) - params.delta(1), true});
    model.terms.push_back(
        {embed_product(layout, {{Factor::qutrit1, &raise_fg}, {Factor::qutrit2, &lower_fg}}),
         params.lambda2(), params.Delta(0) - params.Delta(1), true});
    return model;
}

HamiltonianModel effective_reduced_model(const DeviceParams& params, const SpaceLayout& layout) {
    const double l1 = params.lambda1();
    const double l2 = params.lambda2();
    if (l1 <= 0.0) throw std::invalid_argument("effective_reduced_model: lambda1 must be positive");
    if (std::abs(l1 - l2) > 1e-12 * std::abs(l1))
        throw std::invalid_argument(
            "effective_reduced_model: lambda1 != lambda2 (needs strict_eq10 constraints)");

    HamiltonianModel model(layout);
    const ComplexMatrix raise_eg = qutrit_transition(Level::g, Level::e);
    const ComplexMatrix lower_eg = qutrit_transition(Level::e, Level::g);
    const ComplexMatrix raise_fg = qutrit_transition(Level::g, Level::f);
    const ComplexMatrix lower_fg = qutrit_transition(Level::f, Level::g);
    const ComplexMatrix exchange =
        embed_product(layout, {{Factor::qutrit1, &raise_eg}, {Factor::qutrit2, &lower_eg}}) +
        embed_product(layout, {{Factor::qutrit1, &raise_fg}, {Factor::qutrit2, &lower_fg}});
    model.terms.push_back({exchange, l1, 0.0, true});
    return model;
}

ComplexMatrix h_stage1(double t, const DeviceParams& params, const SpaceLayout& layout,
                       bool include_crosstalk) {
    return stage1_model(params, layout, include_crosstalk).at(t);
}

ComplexMatrix h_stage2(double t, const DeviceParams& params, const SpaceLayout& layout,
                       bool include_crosstalk) {
    return stage2_model(params, layout, include_crosstalk).at(t);
}

ComplexMatrix h_effective_full(double t, const DeviceParams& params, const SpaceLayout& layout) {
    return effective_full_model(params, layout).at(t);
}

ComplexMatrix h_effective_reduced(const DeviceParams& params, const SpaceLayout& layout) {
    return effective_reduced_model(params, layout).at(0.0);
}

std::vector<CollapseChannel> collapse_operators(const DecoherenceRates& rates,
                                                const SpaceLayout& layout) {
    rates.validate();
    std::vector<CollapseChannel> channels;
    auto add = [&](ComplexMatrix op, double rate, ChannelKind kind, std::string label) {
        if (rate > 0.0) channels.push_back({std::move(op), rate, kind, std::move(label)});
    };
    const ComplexMatrix a = annihilation(layout.n_ph);
    add(embed(a, Factor::res_a, layout), rates.kappa_a, ChannelKind::lowering, "a");
    add(embed(a, Factor::res_b, layout), rates.kappa_b, ChannelKind::lowering, "b");
    for (int j = 0; j < 2; ++j) {
        const Factor f = qutrit_factor(j);
        const std::string tag = std::to_string(j + 1);
        add(embed(qutrit_transition(Level::e, Level::g), f, layout), rates.gamma_eg[j],
            ChannelKind::lowering, "sigma_eg" + tag);
        add(embed(qutrit_transition(Level::f, Level::e), f, layout), rates.gamma_fe[j],
            ChannelKind::lowering, "sigma_fe" + tag);
        add(embed(qutrit_transition(Level::f, Level::g), f, layout), rates.gamma_fg[j],
            ChannelKind::lowering, "sigma_fg" + tag);
    }
    for (int j = 0; j < 2; ++j) {
        const Factor f = qutrit_factor(j);
        const std::string tag = std::to_string(j + 1);
        add(embed(qutrit_transition(Level::e, Level::e), f, layout), rates.gamma_phi_e[j],
            ChannelKind::dephasing, "phi_e" + tag);
        add(embed(qutrit_transition(Level::f, Level::f), f, layout), rates.gamma_phi_f[j],
            ChannelKind::dephasing, "phi_f" + tag);
    }
    return channels;
}

}  // namespace qst
