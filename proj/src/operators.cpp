#include "qst/operators.hpp"

#include <cmath>

#include "qst/states.hpp"

namespace qst {

ComplexMatrix annihilation(int n_levels) {
    if (n_levels < 2) throw std::invalid_argument("annihilation: n_levels must be >= 2");
    ComplexMatrix a = ComplexMatrix::Zero(n_levels, n_levels);
    for (int n = 1; n < n_levels; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

ComplexMatrix qutrit_transition(Level from, Level to) {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(static_cast<int>(to), static_cast<int>(from)) = 1.0;
    return m;
}

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix embed_product(const SpaceLayout& layout,
                            std::initializer_list<std::pair<Factor, const ComplexMatrix*>> ops) {
    const Factor order[4] = {Factor::qutrit1, Factor::qutrit2, Factor::res_a, Factor::res_b};
    ComplexMatrix parts[4];
    for (Factor f : order) parts[static_cast<int>(f)] = identity(layout.factor_dim(f));
    for (const auto& [f, op] : ops) {
        const int d = layout.factor_dim(f);
        if (op->rows() != d || op->cols() != d)
            throw std::invalid_argument(std::string("embed: operator dimension ") +
                                        std::to_string(op->rows()) + " does not match factor " +
                                        factor_name(f) + " (dim " + std::to_string(d) + ")");
        parts[static_cast<int>(f)] = *op;
    }
    ComplexMatrix out = parts[0];
    for (int k = 1; k < 4; ++k) out = kron(out, parts[k]);
    return out;
}

ComplexMatrix embed(const ComplexMatrix& local_op, Factor factor, const SpaceLayout& layout) {
    return embed_product(layout, {{factor, &local_op}});
}

Complex expectation(const ComplexMatrix& op, const DensityMatrix& rho) {
    if (op.rows() != rho.dim() || op.cols() != rho.dim())
        throw std::invalid_argument("expectation: operator/state dimension mismatch");
    return (op * rho.matrix()).trace();
}

}  // namespace qst
