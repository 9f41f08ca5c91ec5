#include "katolim/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "katolim/errors.hpp"

namespace katolim {

namespace {

constexpr int kMaxSweeps = 64;

// One cyclic sweep of two-sided Jacobi rotations on A (Hermitian, modified
// in place), accumulating the unitary into V. Returns the number of
// rotations applied.
int jacobi_sweep(Matrix& a, Matrix& v) {
    const std::size_t n = a.rows();
    int rotations = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const double app = a(p, p).real();
            const double aqq = a(q, q).real();
            const cplx apq = a(p, q);
            const double r = std::abs(apq);
            // Relative threshold keeps graded spectra accurate.
            if (r <= 1e-15 * std::sqrt(std::abs(app) * std::abs(aqq)) ||
                r <= 1e-300) {
                continue;
            }
            ++rotations;
            const cplx w = apq / r; // unit phase
            const double tau = (aqq - app) / (2.0 * r);
            const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                          : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;

            // U = [[c, s], [-conj(w)s, conj(w)c]] on the (p,q) plane
            // diagonalizes [[app, apq], [conj(apq), aqq]].
            const cplx wbar = std::conj(w);
            for (std::size_t k = 0; k < n; ++k) {
                const cplx akp = a(k, p);
                const cplx akq = a(k, q);
                a(k, p) = c * akp - wbar * s * akq;
                a(k, q) = s * akp + wbar * c * akq;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const cplx apk = a(p, k);
                const cplx aqk = a(q, k);
                a(p, k) = c * apk - w * s * aqk;
                a(q, k) = s * apk + w * c * aqk;
            }
            a(p, p) = app - t * r;
            a(q, q) = aqq + t * r;
            a(p, q) = 0.0;
            a(q, p) = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const cplx vkp = v(k, p);
                const cplx vkq = v(k, q);
                v(k, p) = c * vkp - wbar * s * vkq;
                v(k, q) = s * vkp + wbar * c * vkq;
            }
        }
    }
    return rotations;
}

} // namespace

EigResult eig_hermitian(const HermitianMatrix& h) {
    const std::size_t n = h.n();
    Matrix a = h.mat();
    Matrix v = Matrix::identity(n);

    int sweep = 0;
    while (sweep < kMaxSweeps) {
        if (jacobi_sweep(a, v) == 0) break;
        ++sweep;
    }
    if (sweep == kMaxSweeps) {
        throw ConvergenceFailure("Jacobi eigensolver exceeded its sweep budget");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() > a(j, j).real();
    });

    EigResult res;
    res.values.resize(n);
    res.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        res.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) res.vectors(i, k) = v(i, order[k]);
    }
    return res;
}

EigResult eig_hermitian(const Matrix& m) {
    return eig_hermitian(HermitianMatrix::from(m));
}

SpectralDecomposition group_spectrum(const PSDMatrix& h, double tau_group) {
    const std::size_t n = h.n();
    EigResult eg = eig_hermitian(h.herm());
    const double a1 = n > 0 ? eg.values.front() : 0.0;
    const double gap_floor = tau_group * std::max(std::abs(a1), 1.0);
    const double zero_floor = tol::zero * std::max(a1, 0.0);

    SpectralDecomposition sd;
    std::vector<std::size_t> kernel_cols;

    std::size_t i = 0;
    while (i < n) {
        if (eg.values[i] <= zero_floor) { // kernel tail (values sorted)
            kernel_cols.push_back(i);
            ++i;
            continue;
        }
        std::size_t j = i;
        double sum = 0.0;
        while (j < n && eg.values[j] > zero_floor &&
               (j == i || eg.values[j - 1] - eg.values[j] <= gap_floor)) {
            sum += eg.values[j];
            ++j;
        }
        const std::size_t mult = j - i;
        Matrix basis(n, mult);
        Matrix proj(n, n);
        for (std::size_t k = 0; k < mult; ++k) {
            for (std::size_t r = 0; r < n; ++r) basis(r, k) = eg.vectors(r, i + k);
        }
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                cplx s{0.0, 0.0};
                for (std::size_t k = 0; k < mult; ++k)
                    s += basis(r, k) * std::conj(basis(c, k));
                proj(r, c) = s;
            }
        sd.values.push_back(sum / static_cast<double>(mult));
        sd.projections.push_back(Projection::from(HermitianMatrix::symmetrized(proj)));
        sd.bases.push_back(std::move(basis));
        i = j;
    }

    Matrix kbasis(n, kernel_cols.size());
    Matrix kproj(n, n);
    for (std::size_t k = 0; k < kernel_cols.size(); ++k)
        for (std::size_t r = 0; r < n; ++r) kbasis(r, k) = eg.vectors(r, kernel_cols[k]);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            cplx s{0.0, 0.0};
            for (std::size_t k = 0; k < kernel_cols.size(); ++k)
                s += kbasis(r, k) * std::conj(kbasis(c, k));
            kproj(r, c) = s;
        }
    sd.kernel_projection = Projection::from(HermitianMatrix::symmetrized(kproj));
    sd.kernel_basis = std::move(kbasis);
    return sd;
}

double min_eigenvalue(const HermitianMatrix& h) {
    if (h.n() == 0) return 0.0;
    return eig_hermitian(h).values.back();
}

double max_eigenvalue(const HermitianMatrix& h) {
    if (h.n() == 0) return 0.0;
    return eig_hermitian(h).values.front();
}

double spectral_norm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    if (m.square() && m.hermiticity_defect() <= tol::herm * std::max(1.0, m.max_abs())) {
        EigResult eg = eig_hermitian(HermitianMatrix::symmetrized(m));
        double top = 0.0;
        for (double v : eg.values) top = std::max(top, std::abs(v));
        return top;
    }
    // General case through the Gram matrix.
    const Matrix g = (m.rows() <= m.cols()) ? m * m.adjoint() : m.adjoint() * m;
    const double lam = std::max(0.0, max_eigenvalue(HermitianMatrix::symmetrized(g)));
    return std::sqrt(lam);
}

} // namespace katolim
