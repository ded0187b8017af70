#pragma once

#include "qst/operators.hpp"

namespace qst {

/// Pure state of the composite space.
struct KetVector {
    ComplexVector amplitudes;

    KetVector() = default;
    explicit KetVector(ComplexVector v) : amplitudes(std::move(v)) {}

    int dim() const { return static_cast<int>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }

    /// Throws unless the norm is 1 within tol.
    void require_normalized(double tol = 1e-10) const;
};

/// Basis product state |q1, q2, na, nb>.
KetVector basis_state(const SpaceLayout& layout, Level q1, Level q2, int na, int nb);

/// Hermitian, unit-trace, positive simulation state. Construction from a ket
/// always satisfies the invariants; evolved states are re-checked through
/// validate().
class DensityMatrix {
  public:
    DensityMatrix() = default;
    explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}

    static DensityMatrix from_ket(const KetVector& psi);

    const ComplexMatrix& matrix() const { return mat_; }
    ComplexMatrix& matrix() { return mat_; }

    int dim() const { return static_cast<int>(mat_.rows()); }
    Complex trace() const { return mat_.trace(); }
    double purity() const;        // Tr(rho^2)
    double min_eigenvalue() const;
    double hermiticity_error() const;  // max |rho - rho^dagger|

    /// Checks Hermiticity (1e-10), unit trace (1e-8) and spectrum
    /// (min eigenvalue >= -1e-8); throws with a diagnostic otherwise.
    void validate(double herm_tol = 1e-10, double trace_tol = 1e-8,
                  double eig_tol = 1e-8) const;

  private:
    ComplexMatrix mat_;
};

double fidelity(const KetVector& ideal, const DensityMatrix& rho);
double fidelity(const KetVector& ideal, const KetVector& psi);

}  // namespace qst
