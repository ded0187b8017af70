#include "qst/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qst {

void IntegratorConfig::validate() const {
    if (!(dt > 0)) throw std::invalid_argument("IntegratorConfig: dt must be positive");
    if (max_steps <= 0) throw std::invalid_argument("IntegratorConfig: max_steps must be positive");
    if (record_stride <= 0)
        throw std::invalid_argument("IntegratorConfig: record_stride must be positive");
    if (method == StepMethod::rk4_step_doubling && !(local_tolerance > 0))
        throw std::invalid_argument("IntegratorConfig: local_tolerance must be positive");
}

double TrajectoryRecord::max_trace_error() const {
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, s.trace_error);
    return worst;
}

double TrajectoryRecord::min_eigenvalue() const {
    double worst = 0.0;
    for (const auto& s : samples) worst = std::min(worst, s.min_eigenvalue);
    return worst;
}

double TrajectoryRecord::max_total_photon() const {
    double peak = 0.0;
    for (const auto& s : samples) peak = std::max(peak, s.n_a + s.n_b);
    return peak;
}

namespace {

constexpr Complex imag_unit{0.0, 1.0};

struct Entry {
    int row, col;
    Complex val;
};

std::vector<Entry> nonzero_entries(const ComplexMatrix& m) {
    std::vector<Entry> entries;
    for (int c = 0; c < m.cols(); ++c)
        for (int r = 0; r < m.rows(); ++r)
            if (m(r, c) != 0.0) entries.push_back({r, c, m(r, c)});
    return entries;
}

// At most one nonzero per row and per column: the jump term and Lambda^dag
// Lambda stay cheap, and the latter is diagonal.
bool is_monomial(const ComplexMatrix& m) {
    std::vector<int> row_count(m.rows(), 0), col_count(m.cols(), 0);
    for (int c = 0; c < m.cols(); ++c)
        for (int r = 0; r < m.rows(); ++r)
            if (m(r, c) != 0.0) {
                if (++row_count[r] > 1 || ++col_count[c] > 1) return false;
            }
    return true;
}

/// Structure-exploiting evaluator for the master-equation right-hand side.
/// The Hamiltonian is applied term by term from its nonzero entries and the
/// commutator is completed from Hermiticity of the input; collapse channels
/// with one nonzero per row/column get an O(dim^2) dissipator, anything else
/// falls back to dense products.
class Propagator {
  public:
    Propagator(const HamiltonianModel& model, const std::vector<CollapseChannel>& channels)
        : dim_(model.layout.dim()) {
        for (const auto& term : model.terms) {
            if (term.op.rows() != dim_ || term.op.cols() != dim_)
                throw std::invalid_argument("Propagator: Hamiltonian term dimension mismatch");
            directed_.push_back({nonzero_entries(term.op), term.amp, term.freq});
            if (term.add_adjoint)
                directed_.push_back({nonzero_entries(term.op.adjoint()), std::conj(term.amp),
                                     -term.freq});
        }
        anticom_diag_ = Eigen::VectorXd::Zero(dim_);
        for (const auto& ch : channels) {
            if (ch.op.rows() != dim_ || ch.op.cols() != dim_)
                throw std::invalid_argument("Propagator: channel dimension mismatch");
            if (ch.rate == 0.0) continue;
            if (is_monomial(ch.op)) {
                MonomialChannel mc{ch.rate, nonzero_entries(ch.op), {}};
                for (const auto& e : mc.entries)
                    anticom_diag_(e.col) += ch.rate * std::norm(e.val);
                mc.runs = collect_runs(mc.entries);
                monomial_.push_back(std::move(mc));
            } else {
                dense_.push_back({ch.rate, ch.op, ch.op.adjoint() * ch.op});
            }
        }
        scratch_.resize(dim_, dim_);
        dense_scratch_.resize(dense_.empty() ? 0 : dim_, dense_.empty() ? 0 : dim_);
    }

    int dim() const { return dim_; }

    // out = -i[H(t), rho] + dissipators; requires Hermitian rho.
    void operator()(double t, const ComplexMatrix& rho, ComplexMatrix& out) {
        // scratch = rho * H(t); then -i[H, rho] = i (scratch - scratch^dag).
        scratch_.setZero();
        for (const auto& term : directed_) {
            const Complex z = term.amp * std::polar(1.0, term.freq * t);
            for (const auto& e : term.entries)
                scratch_.col(e.col).noalias() += (z * e.val) * rho.col(e.row);
        }
        // One Hermitian-by-construction pass fuses the commutator completion
        // with the (diagonal) anticommutator part of every monomial channel.
        for (int j = 0; j < dim_; ++j) {
            const double wj = anticom_diag_(j);
            out(j, j) = -2.0 * scratch_(j, j).imag() - wj * rho(j, j).real();
            for (int i = j + 1; i < dim_; ++i) {
                const Complex z = imag_unit * (scratch_(i, j) - std::conj(scratch_(j, i))) -
                                  (0.5 * (anticom_diag_(i) + wj)) * rho(i, j);
                out(i, j) = z;
                out(j, i) = std::conj(z);
            }
        }

        // Jump terms: value-constant diagonal runs give contiguous segments.
        for (const auto& ch : monomial_) {
            for (const auto& ej : ch.entries) {
                const Complex wj = ch.rate * std::conj(ej.val);
                auto out_col = out.col(ej.row);
                const auto rho_col = rho.col(ej.col);
                for (const auto& run : ch.runs)
                    out_col.segment(run.row, run.len).noalias() +=
                        (run.val * wj) * rho_col.segment(run.col, run.len);
            }
        }
        for (const auto& ch : dense_) {
            dense_scratch_.noalias() = ch.op * rho;
            out.noalias() += ch.rate * (dense_scratch_ * ch.op.adjoint());
            dense_scratch_.noalias() = ch.opdag_op * rho;  // rho*M = (M*rho)^dag
            out.noalias() -= (0.5 * ch.rate) * dense_scratch_;
            out.noalias() -= (0.5 * ch.rate) * dense_scratch_.adjoint();
        }
    }

    // out = -i H(t) psi
    void apply_pure(double t, const ComplexVector& psi, ComplexVector& out) const {
        out.setZero();
        for (const auto& term : directed_) {
            const Complex z = term.amp * std::polar(1.0, term.freq * t);
            for (const auto& e : term.entries) out(e.row) += (z * e.val) * psi(e.col);
        }
        out *= -imag_unit;
    }

  private:
    struct DirectedTerm {
        std::vector<Entry> entries;
        Complex amp;
        double freq;
    };
    struct Run {
        int row, col, len;
        Complex val;
    };
    struct MonomialChannel {
        double rate;
        std::vector<Entry> entries;
        std::vector<Run> runs;
    };

    // Groups column-ordered entries into diagonal runs of equal value, the
    // shape every embedded ladder/projector operator decomposes into.
    static std::vector<Run> collect_runs(const std::vector<Entry>& entries) {
        std::vector<Run> runs;
        for (const auto& e : entries) {
            if (!runs.empty()) {
                Run& last = runs.back();
                if (e.row == last.row + last.len && e.col == last.col + last.len &&
                    e.val == last.val) {
                    ++last.len;
                    continue;
                }
            }
            runs.push_back({e.row, e.col, 1, e.val});
        }
        return runs;
    }
    struct DenseChannel {
        double rate;
        ComplexMatrix op;
        ComplexMatrix opdag_op;
    };

    int dim_;
    std::vector<DirectedTerm> directed_;
    std::vector<MonomialChannel> monomial_;
    std::vector<DenseChannel> dense_;
    Eigen::VectorXd anticom_diag_;
    ComplexMatrix scratch_;
    ComplexMatrix dense_scratch_;
};

/// Dense right-hand side for a Hamiltonian given as a plain callable.
class DenseRhs {
  public:
    DenseRhs(std::function<ComplexMatrix(double)> h, const std::vector<CollapseChannel>& channels)
        : h_(std::move(h)) {
        for (const auto& ch : channels)
            if (ch.rate > 0.0) channels_.push_back({ch.rate, ch.op, ch.op.adjoint() * ch.op});
    }

    void operator()(double t, const ComplexMatrix& rho, ComplexMatrix& out) {
        const ComplexMatrix h = h_(t);
        out.noalias() = -imag_unit * (h * rho);
        out.noalias() += imag_unit * (rho * h);
        for (const auto& ch : channels_) {
            scratch_.noalias() = ch.op * rho;
            out.noalias() += ch.rate * (scratch_ * ch.op.adjoint());
            scratch_.noalias() = ch.opdag_op * rho;
            out.noalias() -= (0.5 * ch.rate) * scratch_;
            out.noalias() -= (0.5 * ch.rate) * scratch_.adjoint();
        }
    }

  private:
    struct PreChannel {
        double rate;
        ComplexMatrix op;
        ComplexMatrix opdag_op;
    };
    std::function<ComplexMatrix(double)> h_;
    std::vector<PreChannel> channels_;
    ComplexMatrix scratch_;
};

/// Diagonal observables recorded along a trajectory. Factor-resolved
/// quantities are only available when the dimension matches the composite
/// 9 * n_ph^2 layout.
struct DiagObservables {
    bool available = false;
    Eigen::VectorXd n_a, n_b;
    Eigen::VectorXd pop_q1[3], pop_q2[3];

    static DiagObservables for_dim(int dim) {
        DiagObservables obs;
        const int n_ph_sq = dim / 9;
        const int n_ph = static_cast<int>(std::lround(std::sqrt(double(n_ph_sq))));
        if (n_ph < 2 || 9 * n_ph * n_ph != dim) return obs;
        const SpaceLayout layout(n_ph);
        obs.available = true;
        obs.n_a = obs.n_b = Eigen::VectorXd::Zero(dim);
        for (int k = 0; k < 3; ++k)
            obs.pop_q1[k] = obs.pop_q2[k] = Eigen::VectorXd::Zero(dim);
        for (int q1 = 0; q1 < 3; ++q1)
            for (int q2 = 0; q2 < 3; ++q2)
                for (int na = 0; na < n_ph; ++na)
                    for (int nb = 0; nb < n_ph; ++nb) {
                        const int i = layout.index(q1, q2, na, nb);
                        obs.n_a(i) = na;
                        obs.n_b(i) = nb;
                        obs.pop_q1[q1](i) = 1.0;
                        obs.pop_q2[q2](i) = 1.0;
                    }
        return obs;
    }

    void fill(const ComplexMatrix& rho, SamplePoint& s) const {
        if (!available) return;
        const Eigen::VectorXd d = rho.diagonal().real();
        s.n_a = n_a.dot(d);
        s.n_b = n_b.dot(d);
        for (int k = 0; k < 3; ++k) {
            s.pop_q1[k] = pop_q1[k].dot(d);
            s.pop_q2[k] = pop_q2[k].dot(d);
        }
    }
};

void symmetrize(ComplexMatrix& m) {
    const int n = static_cast<int>(m.rows());
    for (int j = 0; j < n; ++j) {
        m(j, j) = Complex(m(j, j).real(), 0.0);
        for (int i = j + 1; i < n; ++i) {
            const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
}

double min_eigenvalue_estimate(const ComplexMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

template <class Rhs>
class Rk4Stepper {
  public:
    explicit Rk4Stepper(int dim) {
        for (auto* m : {&k1_, &k2_, &k3_, &k4_, &tmp_}) m->resize(dim, dim);
    }

    void step(Rhs& rhs, ComplexMatrix& y, double t, double h) {
        rhs(t, y, k1_);
        tmp_ = y + (0.5 * h) * k1_;
        rhs(t + 0.5 * h, tmp_, k2_);
        tmp_ = y + (0.5 * h) * k2_;
        rhs(t + 0.5 * h, tmp_, k3_);
        tmp_ = y + h * k3_;
        rhs(t + h, tmp_, k4_);
        y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

  private:
    ComplexMatrix k1_, k2_, k3_, k4_, tmp_;
};

[[noreturn]] void fail_trace(double t, double err) {
    std::ostringstream msg;
    msg << "evolve: trace drift " << err << " at t = " << t << " ns exceeds 1e-6";
    throw std::runtime_error(msg.str());
}

[[noreturn]] void fail_steps(long max_steps) {
    std::ostringstream msg;
    msg << "evolve: step count exceeds max_steps = " << max_steps;
    throw std::runtime_error(msg.str());
}

void warn_step_size(double dt, double nu_max_ghz) {
    const double limit = 1.0 / (20.0 * nu_max_ghz);
    if (dt > limit)
        std::fprintf(stderr,
                     "warning: dt = %g ns exceeds 1/(20 nu_max) = %g ns for nu_max = %g GHz; "
                     "proceeding\n",
                     dt, limit, nu_max_ghz);
}

template <class Rhs>
TrajectoryRecord integrate_density(const DensityMatrix& rho0, Rhs& rhs, double t0, double duration,
                                   const IntegratorConfig& config) {
    config.validate();
    if (!(duration > 0)) throw std::invalid_argument("evolve: duration must be positive");
    rho0.validate();
    const int dim = rho0.dim();
    const DiagObservables obs = DiagObservables::for_dim(dim);

    TrajectoryRecord record;
    record.dt_used = config.dt;
    ComplexMatrix y = rho0.matrix();
    Rk4Stepper<Rhs> stepper(dim);

    auto sample = [&](double t) {
        SamplePoint s;
        s.t = t;
        s.trace_error = std::abs(y.trace().real() - 1.0);
        s.min_eigenvalue = config.spectrum_checks ? min_eigenvalue_estimate(y) : 0.0;
        obs.fill(y, s);
        record.samples.push_back(s);
    };
    auto check_trace = [&](double t) {
        const double err = std::abs(y.trace().real() - 1.0);
        if (!(err <= 1e-6)) fail_trace(t, err);  // negated so NaN aborts too
    };

    sample(t0);
    const double t_end = t0 + duration;

    if (config.method == StepMethod::rk4_fixed) {
        const long n_full = static_cast<long>(std::floor(duration / config.dt + 1e-9));
        const double rem = duration - static_cast<double>(n_full) * config.dt;
        const long n_total = n_full + (rem > 1e-9 * config.dt ? 1 : 0);
        if (n_total > config.max_steps) fail_steps(config.max_steps);
        for (long i = 0; i < n_total; ++i) {
            const double t = t0 + static_cast<double>(i) * config.dt;
            const double h = (i < n_full) ? config.dt : rem;
            stepper.step(rhs, y, t, h);
            symmetrize(y);
            check_trace(t + h);
            ++record.steps;
            if (record.steps % config.record_stride == 0 && i + 1 < n_total)
                sample(t + h);
        }
    } else {
        ComplexMatrix y_full(dim, dim), y_half(dim, dim);
        double t = t0;
        double h = config.dt;
        long attempts = 0;
        while (t < t_end - 1e-12 * duration) {
            if (++attempts > config.max_steps) fail_steps(config.max_steps);
            h = std::min(h, t_end - t);
            y_full = y;
            stepper.step(rhs, y_full, t, h);
            y_half = y;
            stepper.step(rhs, y_half, t, 0.5 * h);
            stepper.step(rhs, y_half, t + 0.5 * h, 0.5 * h);
            const double err = (y_half - y_full).cwiseAbs().maxCoeff() / 15.0;
            if (err <= config.local_tolerance) {
                y = y_half + (y_half - y_full) / 15.0;
                symmetrize(y);
                t += h;
                check_trace(t);
                ++record.steps;
                if (record.steps % config.record_stride == 0 && t < t_end - 1e-12 * duration)
                    sample(t);
                const double grow =
                    0.9 * std::pow(config.local_tolerance / std::max(err, 1e-300), 0.2);
                h *= std::clamp(grow, 1.0, 5.0);
            } else {
                const double shrink = 0.9 * std::pow(config.local_tolerance / err, 0.2);
                h *= std::clamp(shrink, 0.1, 0.9);
            }
        }
    }

    sample(t_end);
    const double final_trace_err = std::abs(y.trace().real() - 1.0);
    if (!(final_trace_err <= 1e-8)) fail_trace(t_end, final_trace_err);
    record.final_state = DensityMatrix(std::move(y));
    return record;
}

}  // namespace

ComplexMatrix lindblad_rhs(double t, const DensityMatrix& rho, const HamiltonianModel& h,
                           const std::vector<CollapseChannel>& channels) {
    const int dim = rho.dim();
    if (h.layout.dim() != dim)
        throw std::invalid_argument("lindblad_rhs: Hamiltonian/state dimension mismatch");
    const ComplexMatrix ham = h.at(t);
    ComplexMatrix out = -imag_unit * (ham * rho.matrix() - rho.matrix() * ham);
    for (const auto& ch : channels) {
        if (ch.op.rows() != dim || ch.op.cols() != dim)
            throw std::invalid_argument("lindblad_rhs: channel dimension mismatch");
        if (ch.rate == 0.0) continue;
        const ComplexMatrix jump = ch.op * rho.matrix() * ch.op.adjoint();
        const ComplexMatrix norm_op = ch.op.adjoint() * ch.op;
        out += ch.rate * (jump - 0.5 * (norm_op * rho.matrix() + rho.matrix() * norm_op));
    }
    return out;
}

TrajectoryRecord evolve(const DensityMatrix& rho0, const HamiltonianModel& h,
                        const std::vector<CollapseChannel>& channels, double t0, double duration,
                        const IntegratorConfig& config) {
    if (h.layout.dim() != rho0.dim())
        throw std::invalid_argument("evolve: Hamiltonian/state dimension mismatch");
    warn_step_size(config.dt, std::max(h.max_oscillation_ghz(), 1e-30));
    Propagator rhs(h, channels);
    return integrate_density(rho0, rhs, t0, duration, config);
}

TrajectoryRecord evolve(const DensityMatrix& rho0,
                        const std::function<ComplexMatrix(double)>& h_builder,
                        const std::vector<CollapseChannel>& channels, double t0, double duration,
                        const IntegratorConfig& config) {
    DenseRhs rhs(h_builder, channels);
    return integrate_density(rho0, rhs, t0, duration, config);
}

KetVector evolve_pure(const KetVector& psi0, const HamiltonianModel& h, double t0, double duration,
                      const IntegratorConfig& config) {
    config.validate();
    if (!(duration > 0)) throw std::invalid_argument("evolve_pure: duration must be positive");
    psi0.require_normalized();
    if (h.layout.dim() != psi0.dim())
        throw std::invalid_argument("evolve_pure: Hamiltonian/state dimension mismatch");
    warn_step_size(config.dt, std::max(h.max_oscillation_ghz(), 1e-30));

    const Propagator prop(h, {});
    const int dim = psi0.dim();
    ComplexVector y = psi0.amplitudes;
    ComplexVector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    auto rk4 = [&](double t, double hstep) {
        prop.apply_pure(t, y, k1);
        tmp = y + (0.5 * hstep) * k1;
        prop.apply_pure(t + 0.5 * hstep, tmp, k2);
        tmp = y + (0.5 * hstep) * k2;
        prop.apply_pure(t + 0.5 * hstep, tmp, k3);
        tmp = y + hstep * k3;
        prop.apply_pure(t + hstep, tmp, k4);
        y += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    const long n_full = static_cast<long>(std::floor(duration / config.dt + 1e-9));
    const double rem = duration - static_cast<double>(n_full) * config.dt;
    const long n_total = n_full + (rem > 1e-9 * config.dt ? 1 : 0);
    if (n_total > config.max_steps) fail_steps(config.max_steps);
    for (long i = 0; i < n_total; ++i) {
        const double t = t0 + static_cast<double>(i) * config.dt;
        rk4(t, (i < n_full) ? config.dt : rem);
    }

    KetVector out(std::move(y));
    if (!(std::abs(out.norm() - 1.0) <= 1e-8)) {
        std::ostringstream msg;
        msg << "evolve_pure: norm drift " << std::abs(out.norm() - 1.0) << " exceeds 1e-8";
        throw std::runtime_error(msg.str());
    }
    return out;
}

}  // namespace qst
