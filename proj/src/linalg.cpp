#include "katolim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "katolim/errors.hpp"

namespace katolim {

namespace {

Projection projector_from_basis(const Matrix& basis) {
    const std::size_t n = basis.rows();
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s{0.0, 0.0};
            for (std::size_t k = 0; k < basis.cols(); ++k)
                s += basis(i, k) * std::conj(basis(j, k));
            p(i, j) = s;
        }
    return Projection::from(HermitianMatrix::symmetrized(p));
}

} // namespace

Projection range_projection(const PSDMatrix& m, double tau_rank, double scale_floor) {
    return projector_from_basis(range_basis(m, tau_rank, scale_floor));
}

Matrix range_basis(const PSDMatrix& m, double tau_rank, double scale_floor) {
    EigResult eg = eig_hermitian(m.herm());
    const std::size_t n = m.n();
    const double top = n > 0 ? std::max(eg.values.front(), 0.0) : 0.0;
    const double cut = tau_rank * std::max(top, scale_floor);
    std::size_t r = 0;
    while (r < n && eg.values[r] > cut && eg.values[r] > 0.0) ++r;
    Matrix basis(n, r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < n; ++i) basis(i, j) = eg.vectors(i, j);
    return basis;
}

GramSchmidtSelection gram_schmidt_select(const std::vector<std::vector<cplx>>& vectors,
                                         double tau_rank) {
    GramSchmidtSelection sel;
    if (vectors.empty()) return sel;
    const std::size_t dim = vectors.front().size();
    double max_norm = 0.0;
    for (const auto& v : vectors) {
        if (v.size() != dim) throw DimensionMismatch("gram_schmidt_select: mixed vector sizes");
        max_norm = std::max(max_norm, dot_abs(v));
    }
    const double cut = std::max(tau_rank * max_norm, tol::abs_floor);

    for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
        std::vector<cplx> r = vectors[idx];
        // Two orthogonalization passes; one is not enough when the residual
        // is small relative to the input.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : sel.basis) {
                const cplx c = inner(u, r);
                for (std::size_t i = 0; i < dim; ++i) r[i] -= c * u[i];
            }
        }
        const double rn = dot_abs(r);
        if (rn > cut) {
            if (sel.basis.empty()) {
                // First kept vector is the input direction itself.
                r = vectors[idx];
                const double n0 = dot_abs(r);
                for (auto& x : r) x /= n0;
            } else {
                for (auto& x : r) x /= rn;
            }
            sel.indices.push_back(idx);
            sel.basis.push_back(std::move(r));
        }
    }
    return sel;
}

std::size_t numeric_rank(const Matrix& columns, double tau_rank) {
    std::vector<std::vector<cplx>> cols(columns.cols());
    for (std::size_t j = 0; j < columns.cols(); ++j) cols[j] = columns.column(j);
    return gram_schmidt_select(cols, tau_rank).indices.size();
}

ScaledPSD matrix_power_scaled(const PSDMatrix& a, double p) {
    EigResult eg = eig_hermitian(a.herm());
    const std::size_t n = a.n();
    const double top = n > 0 ? std::max(eg.values.front(), 0.0) : 0.0;
    // Support cutoff; negative powers act on the support only.
    const double cut = std::max(tol::rank * top, 0.0);

    std::vector<double> lg(n, -std::numeric_limits<double>::infinity());
    double max_lg = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (eg.values[i] > cut) {
            lg[i] = p * std::log2(eg.values[i]);
            max_lg = std::max(max_lg, lg[i]);
        }
    }
    ScaledPSD out;
    if (!std::isfinite(max_lg)) { // zero matrix (or empty support)
        out.matrix = PSDMatrix::from(HermitianMatrix::symmetrized(Matrix::zero(n, n)));
        out.log2_scale = 0.0;
        return out;
    }
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(lg[k])) continue;
        const double w = std::exp2(lg[k] - max_lg); // in (0, 1]
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) += w * eg.vectors(i, k) * std::conj(eg.vectors(j, k));
    }
    out.matrix = PSDMatrix::from(HermitianMatrix::symmetrized(m));
    out.log2_scale = max_lg;
    return out;
}

PSDMatrix matrix_power(const PSDMatrix& a, double p) {
    ScaledPSD s = matrix_power_scaled(a, p);
    if (s.log2_scale > 1020.0 || s.log2_scale < -1020.0) {
        throw Overflow("matrix_power: scale 2^" + std::to_string(s.log2_scale) +
                       " not representable; use matrix_power_scaled");
    }
    const double scale = std::exp2(s.log2_scale);
    Matrix m = s.matrix.mat();
    m *= scale;
    return PSDMatrix::from(HermitianMatrix::symmetrized(m));
}

HermitianMatrix apply_function(const HermitianMatrix& h,
                               const std::function<double(double)>& f,
                               const std::function<bool(double)>& domain) {
    EigResult eg = eig_hermitian(h);
    const std::size_t n = h.n();
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (domain && !domain(eg.values[k])) {
            throw DomainError("apply_function: eigenvalue " + std::to_string(eg.values[k]) +
                              " outside the function domain");
        }
        const double w = f(eg.values[k]);
        if (!std::isfinite(w)) {
            throw DomainError("apply_function: function not finite at eigenvalue " +
                              std::to_string(eg.values[k]));
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) += w * eg.vectors(i, k) * std::conj(eg.vectors(j, k));
    }
    return HermitianMatrix::symmetrized(m);
}

namespace {

std::vector<std::vector<std::size_t>> subsets_lex(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

cplx det_submatrix(const Matrix& m, const std::vector<std::size_t>& rows,
                   const std::vector<std::size_t>& cols, std::vector<cplx>& a) {
    const std::size_t k = rows.size();
    a.assign(k * k, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) a[i * k + j] = m(rows[i], cols[j]);
    // LU with partial pivoting.
    cplx det{1.0, 0.0};
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        double best = std::abs(a[c * k + c]);
        for (std::size_t r = c + 1; r < k; ++r) {
            const double v = std::abs(a[r * k + c]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) return cplx{0.0, 0.0};
        if (piv != c) {
            for (std::size_t j = 0; j < k; ++j) std::swap(a[c * k + j], a[piv * k + j]);
            det = -det;
        }
        det *= a[c * k + c];
        for (std::size_t r = c + 1; r < k; ++r) {
            const cplx factor = a[r * k + c] / a[c * k + c];
            for (std::size_t j = c; j < k; ++j) a[r * k + j] -= factor * a[c * k + j];
        }
    }
    return det;
}

} // namespace

Matrix compound(const Matrix& m, std::size_t k, Execution exec) {
    if (!m.square()) throw DimensionMismatch("compound: matrix must be square");
    const std::size_t n = m.rows();
    if (k < 1 || k > n) throw BadOrder("compound order k must satisfy 1 <= k <= n");
    const auto subs = subsets_lex(n, k);
    const std::size_t d = subs.size();
    Matrix out(d, d);

    auto fill_row = [&](std::size_t i, std::vector<cplx>& scratch) {
        for (std::size_t j = 0; j < d; ++j)
            out(i, j) = det_submatrix(m, subs[i], subs[j], scratch);
    };

    if (exec == Execution::parallel) {
#if defined(KATOLIM_HAVE_OPENMP)
#pragma omp parallel
        {
            std::vector<cplx> scratch(k * k);
#pragma omp for schedule(static)
            for (long long i = 0; i < static_cast<long long>(d); ++i)
                fill_row(static_cast<std::size_t>(i), scratch);
        }
        return out;
#endif
    }
    std::vector<cplx> scratch(k * k);
    for (std::size_t i = 0; i < d; ++i) fill_row(i, scratch);
    return out;
}

Projection projection_join(const Projection& p, const Projection& e, double tau_rank) {
    if (p.n() != e.n()) throw DimensionMismatch("projection_join: dimension mismatch");
    const Matrix sum = p.mat() + e.mat();
    return range_projection(PSDMatrix::from(HermitianMatrix::symmetrized(sum)), tau_rank);
}

Projection projection_meet(const Projection& p, const Projection& e, double tau_rank) {
    if (p.n() != e.n()) throw DimensionMismatch("projection_meet: dimension mismatch");
    const std::size_t n = p.n();
    const Matrix pperp = Matrix::identity(n) - p.mat();
    const Matrix m = e.mat() * pperp * e.mat();
    // Projections have natural scale 1; the floor keeps a numerically-zero
    // E P_perp E from promoting roundoff into range directions.
    const Projection r =
        range_projection(PSDMatrix::from(HermitianMatrix::symmetrized(m)), tau_rank, 1.0);
    const Matrix q = e.mat() - r.mat();
    // Snap eigenvalues to {0, 1}; q is idempotent only up to roundoff.
    EigResult eg = eig_hermitian(HermitianMatrix::symmetrized(q));
    Matrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (eg.values[k] <= 0.5) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += eg.vectors(i, k) * std::conj(eg.vectors(j, k));
    }
    return Projection::from(HermitianMatrix::symmetrized(out));
}

} // namespace katolim
