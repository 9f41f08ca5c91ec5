#include "katolim/graded.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "katolim/errors.hpp"
#include "katolim/linalg.hpp"

namespace katolim {

namespace {

constexpr int kMaxSweeps = 256;
constexpr double kPairTol = 1e-14; // relative orthogonality target per pair

using XColumn = std::vector<XComplex>;

XReal col_norm2(const XColumn& g) {
    XReal s;
    for (const auto& z : g) s = s + z.abs2();
    return s;
}

XComplex col_inner(const XColumn& a, const XColumn& b) {
    XComplex s;
    for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i].conj() * b[i];
    return s;
}

// Lower bound on the kept singular values: sigma_r(B D) >= sigma_r(B) * 2^{E_min}
// for the unscaled contents B and the diagonal of scales D. Columns that
// fall far below this are structurally null; without an explicit floor they
// would cancel 53 more bits on every rotation and never converge (extended
// exponents remove the underflow that would normally stop the chase).
double null_floor_log2(const std::vector<GradedColumn>& columns, std::size_t rank,
                       double tier_offset) {
    if (rank == 0) return -std::numeric_limits<double>::infinity();
    const std::size_t m = columns.front().content.size();
    Matrix c(m, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t i = 0; i < m; ++i) c(i, j) = columns[j].content[i];
    const Matrix gram = c.adjoint() * c;
    const auto vals = eig_hermitian(HermitianMatrix::symmetrized(gram)).values;
    const double s2 = std::max(vals[std::min(rank, vals.size()) - 1], 1e-120);
    double min_scale = std::numeric_limits<double>::infinity();
    for (const auto& col : columns)
        min_scale = std::min(min_scale, col.infinite ? tier_offset : col.log2_scale);
    if (!std::isfinite(min_scale)) min_scale = 0.0;
    return 0.5 * std::log2(s2) + min_scale - 200.0;
}

} // namespace

std::size_t graded_rank(const std::vector<GradedColumn>& columns, double tau_rank) {
    std::vector<std::vector<cplx>> cols;
    cols.reserve(columns.size());
    for (const auto& c : columns) cols.push_back(c.content);
    return gram_schmidt_select(cols, tau_rank).indices.size();
}

GradedSvd graded_svd(const std::vector<GradedColumn>& columns, std::size_t rank,
                     bool want_right) {
    const std::size_t ncols = columns.size();
    if (ncols == 0) return GradedSvd{{}, {}, Matrix(0, 0), Matrix(0, 0)};
    const std::size_t m = columns.front().content.size();

    // Infinite-tier columns get a scale exponent far above every finite
    // interaction; after orthogonalization their sigmas are recognized by
    // exceeding half that offset.
    double max_abs_scale = 0.0;
    for (const auto& c : columns) {
        if (c.content.size() != m) throw DimensionMismatch("graded_svd: mixed column sizes");
        if (!c.infinite) max_abs_scale = std::max(max_abs_scale, std::abs(c.log2_scale));
    }
    const double tier_offset = 4.0 * max_abs_scale + 4096.0;

    std::vector<XColumn> g(ncols, XColumn(m));
    for (std::size_t j = 0; j < ncols; ++j) {
        const double scale = columns[j].infinite ? tier_offset : columns[j].log2_scale;
        for (std::size_t i = 0; i < m; ++i)
            g[j][i] = XComplex::scaled(columns[j].content[i], scale);
    }

    Matrix right = want_right ? Matrix::identity(ncols) : Matrix(0, 0);

    const double floor_log2 = null_floor_log2(columns, rank, tier_offset);
    auto cull = [&](std::size_t j) {
        const XReal n2 = col_norm2(g[j]);
        if (n2.is_zero()) return;
        if (0.5 * n2.log2_abs() < floor_log2)
            for (auto& z : g[j]) z = XComplex{};
    };
    for (std::size_t j = 0; j < ncols; ++j) cull(j);

    int sweep = 0;
    while (sweep < kMaxSweeps) {
        int rotations = 0;
        for (std::size_t p = 0; p + 1 < ncols; ++p) {
            for (std::size_t q = p + 1; q < ncols; ++q) {
                const XReal app = col_norm2(g[p]);
                const XReal aqq = col_norm2(g[q]);
                if (app.is_zero() || aqq.is_zero()) continue;
                const XComplex apq = col_inner(g[p], g[q]);
                const XReal r2 = apq.abs2();
                if (r2 <= XReal::from(kPairTol * kPairTol) * app * aqq) continue;
                ++rotations;

                const XReal r = xsqrt(r2);
                const cplx w = apq.div(r).to_complex(); // unit phase, O(1)
                const XReal tau = (aqq - app) / (XReal::from(2.0) * r);
                const XReal root = xsqrt(XReal::from(1.0) + tau * tau);
                const XReal t = (tau.sign() >= 0)
                                    ? XReal::from(1.0) / (tau + root)
                                    : XReal::from(1.0) / (tau - root);
                const double c = 1.0 / std::sqrt(1.0 + (t * t).to_double());
                const XReal cs = XReal::from(c);
                const XReal sn = t * cs; // can be arbitrarily small; kept extended

                // Columns [g_p g_q] <- [g_p g_q] U with
                // U = [[c, s], [-conj(w) s, conj(w) c]].
                const XComplex wbar_s = sn * XComplex::from(std::conj(w));
                const XComplex wbar_c = cs * XComplex::from(std::conj(w));
                for (std::size_t i = 0; i < m; ++i) {
                    const XComplex gpi = g[p][i];
                    const XComplex gqi = g[q][i];
                    g[p][i] = cs * gpi - wbar_s * gqi;
                    g[q][i] = sn * gpi + wbar_c * gqi;
                }
                if (want_right) {
                    const cplx sd = sn.to_double() * std::conj(w);
                    const cplx cd = c * std::conj(w);
                    for (std::size_t i = 0; i < ncols; ++i) {
                        const cplx rip = right(i, p);
                        const cplx riq = right(i, q);
                        right(i, p) = c * rip - sd * riq;
                        right(i, q) = sn.to_double() * rip + cd * riq;
                    }
                }
                cull(p);
                cull(q);
            }
        }
        if (rotations == 0) break;
        ++sweep;
    }
    if (sweep == kMaxSweeps) {
        throw ConvergenceFailure("one-sided Jacobi exceeded its sweep budget");
    }

    std::vector<XReal> norms(ncols);
    for (std::size_t j = 0; j < ncols; ++j) norms[j] = col_norm2(g[j]);
    std::vector<std::size_t> order(ncols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return norms[b] < norms[a]; });

    const std::size_t keep = std::min(rank, ncols);
    GradedSvd out;
    out.vectors = Matrix(m, keep);
    if (want_right) out.right = Matrix(ncols, keep);
    for (std::size_t k = 0; k < keep; ++k) {
        const std::size_t j = order[k];
        if (norms[j].is_zero()) {
            // Rank demanded more columns than survived; report exact zeros.
            out.log2_sigma.push_back(-std::numeric_limits<double>::infinity());
            out.infinite.push_back(false);
            continue;
        }
        const XReal sigma = xsqrt(norms[j]);
        const double lg = sigma.log2_abs();
        out.infinite.push_back(lg > tier_offset / 2.0);
        out.log2_sigma.push_back(lg);
        for (std::size_t i = 0; i < m; ++i)
            out.vectors(i, k) = g[j][i].div(sigma).to_complex();
        if (want_right)
            for (std::size_t i = 0; i < ncols; ++i) out.right(i, k) = right(i, j);
    }
    return out;
}

} // namespace katolim
