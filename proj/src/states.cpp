#include "qst/states.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace qst {

void KetVector::require_normalized(double tol) const {
    const double n = norm();
    if (std::abs(n - 1.0) > tol) {
        std::ostringstream msg;
        msg << "KetVector: norm " << n << " deviates from 1 by more than " << tol;
        throw std::runtime_error(msg.str());
    }
}

KetVector basis_state(const SpaceLayout& layout, Level q1, Level q2, int na, int nb) {
    if (na < 0 || na >= layout.n_ph || nb < 0 || nb >= layout.n_ph)
        throw std::invalid_argument("basis_state: Fock index outside truncation");
    ComplexVector v = ComplexVector::Zero(layout.dim());
    v(layout.index(q1, q2, na, nb)) = 1.0;
    return KetVector(std::move(v));
}

DensityMatrix DensityMatrix::from_ket(const KetVector& psi) {
    psi.require_normalized();
    return DensityMatrix(psi.amplitudes * psi.amplitudes.adjoint());
}

double DensityMatrix::purity() const { return (mat_ * mat_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double DensityMatrix::hermiticity_error() const {
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
    std::ostringstream msg;
    const double herm = hermiticity_error();
    if (herm > herm_tol) {
        msg << "DensityMatrix: Hermiticity deviation " << herm << " > " << herm_tol;
        throw std::runtime_error(msg.str());
    }
    const Complex tr = trace();
    if (std::abs(tr - 1.0) > trace_tol) {
        msg << "DensityMatrix: trace " << tr << " deviates from 1 beyond " << trace_tol;
        throw std::runtime_error(msg.str());
    }
    const double lmin = min_eigenvalue();
    if (lmin < -eig_tol) {
        msg << "DensityMatrix: minimum eigenvalue " << lmin << " < -" << eig_tol;
        throw std::runtime_error(msg.str());
    }
}

double fidelity(const KetVector& ideal, const DensityMatrix& rho) {
    if (ideal.dim() != rho.dim())
        throw std::invalid_argument("fidelity: state dimension mismatch");
    const double p = (ideal.amplitudes.adjoint() * rho.matrix() * ideal.amplitudes)(0).real();
    return std::sqrt(std::max(p, 0.0));
}

double fidelity(const KetVector& ideal, const KetVector& psi) {
    if (ideal.dim() != psi.dim())
        throw std::invalid_argument("fidelity: state dimension mismatch");
    return std::abs(ideal.amplitudes.dot(psi.amplitudes));
}

}  // namespace qst
