#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qst {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Qutrit levels in fixed basis order (g, e, f).
enum class Level : int { g = 0, e = 1, f = 2 };

/// Tensor factors of the composite space, in fixed order.
enum class Factor : int { qutrit1 = 0, qutrit2 = 1, res_a = 2, res_b = 3 };

constexpr const char* factor_name(Factor f) {
    switch (f) {
        case Factor::qutrit1: return "qutrit1";
        case Factor::qutrit2: return "qutrit2";
        case Factor::res_a: return "res_a";
        case Factor::res_b: return "res_b";
    }
    return "?";
}

/// Ordered tensor-factor description of the composite Hilbert space:
/// (qutrit 1, qutrit 2, resonator a, resonator b), with qutrit levels
/// ordered (g, e, f) and Fock states ascending. The basis index of
/// |q1, q2, na, nb> is ((q1*3 + q2)*n_ph + na)*n_ph + nb. Every embedding
/// in the codebase goes through this map.
struct SpaceLayout {
    int n_ph;  // Fock states 0 .. n_ph-1 per resonator

    explicit SpaceLayout(int photon_levels) : n_ph(photon_levels) {
        if (n_ph < 2) throw std::invalid_argument("SpaceLayout: n_ph must be >= 2");
    }

    int dim() const { return 9 * n_ph * n_ph; }

    int factor_dim(Factor f) const {
        return (f == Factor::qutrit1 || f == Factor::qutrit2) ? 3 : n_ph;
    }

    int index(int q1, int q2, int na, int nb) const {
        return ((q1 * 3 + q2) * n_ph + na) * n_ph + nb;
    }
    int index(Level q1, Level q2, int na, int nb) const {
        return index(static_cast<int>(q1), static_cast<int>(q2), na, nb);
    }
};

/// Bosonic lowering operator on a truncated Fock space:
/// <n-1|a|n> = sqrt(n). Rejects n_levels < 2.
ComplexMatrix annihilation(int n_levels);

/// 3x3 operator |to><from| in basis order (g, e, f). Projectors are the
/// from == to case.
ComplexMatrix qutrit_transition(Level from, Level to);

ComplexMatrix identity(int n);

/// Kronecker product, row-major composition: kron(A, B) acts as A on the
/// leading factor.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Extend a single-factor operator to the full composite space, identity on
/// all other factors. Throws on dimension mismatch.
ComplexMatrix embed(const ComplexMatrix& local_op, Factor factor, const SpaceLayout& layout);

/// Extend a product of single-factor operators (at most one per factor) to
/// the full space. Factors not mentioned get the identity.
ComplexMatrix embed_product(const SpaceLayout& layout,
                            std::initializer_list<std::pair<Factor, const ComplexMatrix*>> ops);

class DensityMatrix;

/// Tr(op * rho). Real within 1e-10 for Hermitian op.
Complex expectation(const ComplexMatrix& op, const DensityMatrix& rho);

}  // namespace qst
