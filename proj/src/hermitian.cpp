#include "katolim/hermitian.hpp"

#include <cmath>

#include "katolim/eig.hpp"
#include "katolim/errors.hpp"

namespace katolim {

HermitianMatrix HermitianMatrix::from(const Matrix& m, double tau) {
    if (!m.square()) throw InputError("Hermitian matrix must be square");
    if (!m.all_finite()) throw InputError("matrix has non-finite entries");
    const double defect = m.hermiticity_defect();
    if (defect > tau * std::max(1.0, m.max_abs())) {
        throw NonHermitianInput("symmetry defect " + std::to_string(defect) +
                                " exceeds tolerance");
    }
    return symmetrized(m);
}

HermitianMatrix HermitianMatrix::symmetrized(const Matrix& m) {
    HermitianMatrix h;
    const std::size_t n = m.rows();
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = cplx{m(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            s(i, j) = v;
            s(j, i) = std::conj(v);
        }
    }
    h.mat_ = std::move(s);
    return h;
}

PSDMatrix PSDMatrix::from(const HermitianMatrix& h, double tau) {
    if (h.n() > 0) {
        EigResult eg = eig_hermitian(h);
        const double top = std::abs(eg.values.front());
        if (eg.values.back() < -tau * std::max(top, 1.0)) {
            throw NotPositiveSemidefinite("smallest eigenvalue " +
                                          std::to_string(eg.values.back()) +
                                          " below PSD tolerance");
        }
    }
    PSDMatrix p;
    p.h_ = h;
    return p;
}

PSDMatrix PSDMatrix::from(const Matrix& m, double tau) {
    return from(HermitianMatrix::from(m), tau);
}

Projection Projection::from(const HermitianMatrix& h, double tau) {
    const Matrix& p = h.mat();
    const Matrix p2 = p * p;
    const double defect = (p2 - p).max_abs();
    if (defect > tau) throw NotProjection("idempotence defect " + std::to_string(defect));
    const double tr = p.trace_real();
    const double r = std::round(tr);
    if (std::abs(tr - r) > 0.01 || r < -0.5) {
        throw NotProjection("trace " + std::to_string(tr) + " is not close to an integer rank");
    }
    Projection out;
    out.h_ = h;
    out.rank_ = static_cast<std::size_t>(r);
    return out;
}

Projection Projection::from(const Matrix& m, double tau) {
    return from(HermitianMatrix::from(m), tau);
}

Projection Projection::zero(std::size_t n) {
    return from(HermitianMatrix::symmetrized(Matrix::zero(n, n)));
}

Projection Projection::complement() const {
    return from(HermitianMatrix::symmetrized(Matrix::identity(n()) - mat()));
}

} // namespace katolim
