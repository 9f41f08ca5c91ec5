#include "katolim/kato.hpp"

#include <algorithm>
#include <cmath>

#include "katolim/errors.hpp"
#include "katolim/graded.hpp"

namespace katolim {

namespace {

// Cluster-blocked image selection: for each eigenvalue cluster of A
// (descending), keep an orthonormal basis of K(cluster span) modulo the
// span already selected. Returns per-cluster picks.
struct Selection {
    std::vector<std::size_t> indices;       // global positions in the descending list
    std::vector<double> values;             // cluster value per kept vector
    std::vector<std::vector<cplx>> frame;   // orthonormal u_k
};

Selection select_images(const Matrix& k, const SpectralDecomposition& sd, double tau_rank) {
    Selection sel;
    const std::size_t np = k.rows();

    // Global threshold: relative to the largest image norm over all
    // support eigenvectors.
    double max_norm = 0.0;
    std::vector<std::vector<std::vector<cplx>>> images(sd.values.size());
    for (std::size_t c = 0; c < sd.values.size(); ++c) {
        const Matrix& basis = sd.bases[c];
        for (std::size_t j = 0; j < basis.cols(); ++j) {
            images[c].push_back(k.apply(basis.column(j)));
            max_norm = std::max(max_norm, dot_abs(images[c].back()));
        }
    }
    const double cut = std::max(tau_rank * max_norm, tol::abs_floor);

    std::vector<std::vector<cplx>> kept; // orthonormal, accumulated across clusters
    std::size_t offset = 0;
    for (std::size_t c = 0; c < sd.values.size(); ++c) {
        std::size_t picked = 0;
        for (std::size_t j = 0; j < images[c].size(); ++j) {
            std::vector<cplx> r = images[c][j];
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& u : kept) {
                    const cplx w = inner(u, r);
                    for (std::size_t i = 0; i < np; ++i) r[i] -= w * u[i];
                }
            }
            const double rn = dot_abs(r);
            if (rn <= cut) continue;
            if (kept.empty()) {
                // Pin u_1 to the first image direction itself.
                r = images[c][j];
                const double n0 = dot_abs(r);
                for (auto& x : r) x /= n0;
                // Re-orthogonalization is a no-op for the first vector.
            } else {
                for (auto& x : r) x /= rn;
            }
            sel.indices.push_back(offset + picked);
            sel.values.push_back(sd.values[c]);
            kept.push_back(r);
            ++picked;
        }
        offset += images[c].size();
    }
    sel.frame = std::move(kept);
    return sel;
}

Matrix frame_to_matrix(std::size_t rows, const std::vector<std::vector<cplx>>& frame) {
    Matrix f(rows, frame.size());
    for (std::size_t j = 0; j < frame.size(); ++j) f.set_column(j, frame[j]);
    return f;
}

} // namespace

CongruenceLimitResult congruence_limit(const Matrix& k, const PSDMatrix& a,
                                       double tau_rank, double tau_group) {
    if (k.cols() != a.n()) throw DimensionMismatch("congruence_limit: K columns must match A");
    const std::size_t np = k.rows();
    const SpectralDecomposition sd = group_spectrum(a, tau_group);
    const Selection sel = select_images(k, sd, tau_rank);

    Matrix limit(np, np);
    for (std::size_t t = 0; t < sel.values.size(); ++t) {
        const auto& u = sel.frame[t];
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = 0; j < np; ++j)
                limit(i, j) += sel.values[t] * u[i] * std::conj(u[j]);
    }

    CongruenceLimitResult res;
    res.limit = PSDMatrix::from(HermitianMatrix::symmetrized(limit));
    res.indices = sel.indices;
    res.values = sel.values;
    res.frame = frame_to_matrix(np, sel.frame);
    res.predicted_spectrum.assign(np, 0.0);
    for (std::size_t t = 0; t < sel.values.size() && t < np; ++t)
        res.predicted_spectrum[t] = sel.values[t];
    return res;
}

PredictedSpectrum predicted_eigenvalues(const Matrix& k, const PSDMatrix& a,
                                        double tau_rank, double tau_group) {
    const CongruenceLimitResult r = congruence_limit(k, a, tau_rank, tau_group);
    const SpectralDecomposition sd = group_spectrum(a, tau_group);
    std::size_t support = 0;
    for (const auto& b : sd.bases) support += b.cols();
    PredictedSpectrum out;
    out.values = r.predicted_spectrum;
    // Independence over the positive part; for positive definite A this is
    // the full linear-independence criterion m == n.
    out.independent = (r.values.size() == support) && support > 0;
    return out;
}

namespace {

MapLimitResult filtration_limit(const PositiveMapSpec& phi, const SpectralDecomposition& sd,
                                double tau_rank, bool from_bottom) {
    const std::size_t m = sd.values.size();
    const std::size_t np = phi.out_dim();

    // Cumulative spectral projections, from the top (positive powers) or
    // the bottom (inverse powers), pushed through Phi and ranged. Ranges are
    // cut relative to the scale of Phi(I): a cluster that Phi kills must
    // contribute nothing, not its roundoff.
    const double phi_scale = max_eigenvalue(
        HermitianMatrix::symmetrized(phi.apply(Matrix::identity(phi.in_dim()))));
    std::vector<Projection> f(m, Projection::zero(np));
    Matrix acc(sd.n(), sd.n());
    for (std::size_t t = 0; t < m; ++t) {
        const std::size_t c = from_bottom ? m - 1 - t : t;
        acc += sd.projections[c].mat();
        f[c] = range_projection(
            PSDMatrix::from(phi.apply(HermitianMatrix::symmetrized(acc))), tau_rank, phi_scale);
    }

    MapLimitResult res;
    res.values = sd.values;
    Matrix limit(np, np);
    for (std::size_t c = 0; c < m; ++c) {
        Matrix inc = f[c].mat();
        if (from_bottom) {
            if (c + 1 < m) inc -= f[c + 1].mat();
        } else {
            if (c > 0) inc -= f[c - 1].mat();
        }
        res.projections.push_back(Projection::from(HermitianMatrix::symmetrized(inc)));
        limit += sd.values[c] * inc;
    }
    res.limit = PSDMatrix::from(HermitianMatrix::symmetrized(limit));
    return res;
}

} // namespace

MapLimitResult map_limit(const PositiveMapSpec& phi, const PSDMatrix& a,
                         double tau_rank, double tau_group) {
    if (phi.in_dim() != a.n()) throw DimensionMismatch("map_limit: dimension mismatch");
    return filtration_limit(phi, group_spectrum(a, tau_group), tau_rank, false);
}

MapLimitResult neg_map_limit(const PositiveMapSpec& phi, const PSDMatrix& a,
                             double tau_rank, double tau_group) {
    if (phi.in_dim() != a.n()) throw DimensionMismatch("neg_map_limit: dimension mismatch");
    return filtration_limit(phi, group_spectrum(a, tau_group), tau_rank, true);
}

EpsilonNegLimit epsilon_neg_limit(const PositiveMapSpec& phi, const PSDMatrix& a, double p,
                                  int schedule_steps, double cauchy_tol) {
    if (phi.in_dim() != a.n()) throw DimensionMismatch("epsilon_neg_limit: dimension mismatch");
    if (p < 1.0) throw InputError("epsilon_neg_limit requires p >= 1");

    // Work on the support of Phi(I); the (-1/p)-root is taken there and
    // re-embedded, so off-support directions are exactly zero. When the map
    // is already strictly positive it is used as-is.
    const PositiveMapSpec compressed = phi.support_compress();
    const bool was_compressed = compressed.out_dim() != phi.out_dim();
    const Matrix embed =
        was_compressed
            ? range_basis(PSDMatrix::from(HermitianMatrix::symmetrized(
                  phi.apply(Matrix::identity(phi.in_dim())))))
            : Matrix::identity(phi.out_dim());
    const std::vector<Matrix> kraus = compressed.to_kraus();
    const std::size_t nc = compressed.out_dim();

    const EigResult eg = eig_hermitian(a.herm());
    const std::size_t n = a.n();

    EpsilonNegLimit out;
    HermitianMatrix prev;
    bool have_prev = false;
    for (int step = 1; step <= schedule_steps; ++step) {
        const double eps = std::pow(10.0, -step);
        // Phi((A+eps)^{-p}) = G G* with columns K v_j at scale (a_j+eps)^{-p/2};
        // strictly positive after compression, so every sigma is genuine.
        std::vector<GradedColumn> cols;
        for (std::size_t j = 0; j < n; ++j) {
            const double lg = -0.5 * p * std::log2(std::max(eg.values[j], 0.0) + eps);
            for (const auto& k : kraus) {
                GradedColumn c;
                c.content = k.apply(eg.vectors.column(j));
                c.log2_scale = lg;
                cols.push_back(std::move(c));
            }
        }
        const GradedSvd svd = graded_svd(cols, nc);
        Matrix it(nc, nc);
        for (std::size_t k = 0; k < svd.log2_sigma.size(); ++k) {
            if (!std::isfinite(svd.log2_sigma[k])) continue;
            const double v = std::exp2(-2.0 * svd.log2_sigma[k] / p);
            for (std::size_t i = 0; i < nc; ++i)
                for (std::size_t j = 0; j < nc; ++j)
                    it(i, j) += v * svd.vectors(i, k) * std::conj(svd.vectors(j, k));
        }
        const HermitianMatrix iterate =
            HermitianMatrix::symmetrized(embed * it * embed.adjoint());

        out.epsilons.push_back(eps);
        if (have_prev) {
            const double drop = min_eigenvalue(HermitianMatrix::symmetrized(prev.mat() - iterate.mat()));
            const double scale = std::max(1.0, spectral_norm(prev.mat()));
            if (drop < -tol::psd * scale) {
                throw NoConvergence("epsilon_neg_limit: iterates not decreasing in epsilon");
            }
            out.cauchy_delta = spectral_norm(prev.mat() - iterate.mat());
            if (out.cauchy_delta <= cauchy_tol) {
                out.value = iterate;
                return out;
            }
        }
        prev = iterate;
        have_prev = true;
    }
    out.value = prev;
    if (out.cauchy_delta > 1e-6) {
        throw NoConvergence("epsilon_neg_limit: schedule ended with delta " +
                            std::to_string(out.cauchy_delta));
    }
    return out;
}

PSDMatrix spectral_sup(const PSDMatrix& a, const PSDMatrix& b,
                       double tau_rank, double tau_group) {
    if (a.n() != b.n()) throw DimensionMismatch("spectral_sup: dimension mismatch");
    const PSDMatrix ab = PSDMatrix::from(
        HermitianMatrix::symmetrized(Matrix::direct_sum(a.mat(), b.mat())));
    return map_limit(PositiveMapSpec::block_average(a.n()), ab, tau_rank, tau_group).limit;
}

PSDMatrix spectral_inf(const PSDMatrix& a, const PSDMatrix& b,
                       double tau_rank, double tau_group) {
    if (a.n() != b.n()) throw DimensionMismatch("spectral_inf: dimension mismatch");
    const std::size_t n = a.n();
    const SpectralDecomposition sa = group_spectrum(a, tau_group);
    const SpectralDecomposition sb = group_spectrum(b, tau_group);

    // Merged positive level values, descending, fused when closer than the
    // grouping tolerance.
    std::vector<double> levels;
    levels.insert(levels.end(), sa.values.begin(), sa.values.end());
    levels.insert(levels.end(), sb.values.begin(), sb.values.end());
    std::sort(levels.begin(), levels.end(), std::greater<>());
    const double fuse = tau_group * std::max(levels.empty() ? 0.0 : levels.front(), 1.0);
    std::vector<double> c;
    for (double v : levels) {
        if (c.empty() || c.back() - v > fuse) c.push_back(v);
    }

    auto level_proj = [&](const SpectralDecomposition& sd, double x) {
        Matrix acc(n, n);
        for (std::size_t i = 0; i < sd.values.size(); ++i)
            if (sd.values[i] >= x - fuse) acc += sd.projections[i].mat();
        return Projection::from(HermitianMatrix::symmetrized(acc));
    };

    Matrix out(n, n);
    Projection prev = Projection::zero(n);
    for (double ck : c) {
        const Projection g = projection_meet(level_proj(sa, ck), level_proj(sb, ck), tau_rank);
        out += ck * (g.mat() - prev.mat());
        prev = g;
    }
    return PSDMatrix::from(HermitianMatrix::symmetrized(out));
}

} // namespace katolim
