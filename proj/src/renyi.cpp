#include "katolim/renyi.hpp"

#include <algorithm>
#include <cmath>

#include "katolim/errors.hpp"
#include "katolim/graded.hpp"

#if defined(KATOLIM_HAVE_OPENMP)
#include <omp.h>
#endif

namespace katolim {

DensityMatrix DensityMatrix::from(const PSDMatrix& rho, double tau) {
    const double tr = rho.mat().trace_real();
    if (std::abs(tr - 1.0) > tau)
        throw InputError("density matrix trace " + std::to_string(tr) + " != 1");
    DensityMatrix d;
    d.rho_ = rho;
    return d;
}

namespace {

// Generalized power on the support.
HermitianMatrix psd_power(const PSDMatrix& a, double p) {
    const EigResult eg = eig_hermitian(a.herm());
    const double cut = tol::rank * std::max(eg.values.front(), 0.0);
    const std::size_t n = a.n();
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (eg.values[k] <= cut) continue;
        const double w = std::pow(eg.values[k], p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) += w * eg.vectors(i, k) * std::conj(eg.vectors(j, k));
    }
    return HermitianMatrix::symmetrized(m);
}

bool support_contained(const Projection& inner, const Projection& outer) {
    // ran(inner) <= ran(outer)  iff  (I - outer) inner == 0.
    const Matrix leak =
        (Matrix::identity(outer.n()) - outer.mat()) * inner.mat();
    return spectral_norm(leak) <= 1e-8;
}

} // namespace

RenyiPair renyi_divergences(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha) {
    if (rho.n() != sigma.n()) throw DimensionMismatch("renyi: dimension mismatch");
    if (alpha <= 0.0 || alpha == 1.0) throw BadAlpha("renyi needs alpha in (0, inf) \\ {1}");

    const Projection rho0 = range_projection(rho.psd());
    const Projection sigma0 = range_projection(sigma.psd());
    if (alpha > 1.0 && !support_contained(rho0, sigma0)) {
        return {ExtendedReal::infinity(), ExtendedReal::infinity()};
    }

    RenyiPair out;
    {
        const Matrix prod = psd_power(rho.psd(), alpha).mat() * psd_power(sigma.psd(), 1.0 - alpha).mat();
        const double tr = prod.trace().real();
        if (tr <= 0.0) {
            out.d_alpha = ExtendedReal::infinity();
        } else {
            out.d_alpha = ExtendedReal::finite(std::log(tr) / (alpha - 1.0));
        }
    }
    {
        const double s = (1.0 - alpha) / (2.0 * alpha);
        const Matrix w = psd_power(sigma.psd(), s).mat();
        const Matrix core = w * rho.mat() * w;
        const EigResult eg = eig_hermitian(HermitianMatrix::symmetrized(core));
        double tr = 0.0;
        for (double v : eg.values)
            if (v > 0.0) tr += std::pow(v, alpha);
        if (tr <= 0.0) {
            out.d_tilde_alpha = ExtendedReal::infinity();
        } else {
            out.d_tilde_alpha = ExtendedReal::finite(std::log(tr) / (alpha - 1.0));
        }
    }
    return out;
}

ZeroLimitReport zero_limits(const DensityMatrix& rho, const DensityMatrix& sigma,
                            double tau_rank, double tau_group) {
    if (rho.n() != sigma.n()) throw DimensionMismatch("zero_limits: dimension mismatch");
    const std::size_t n = rho.n();
    const Projection rho0 = range_projection(rho.psd(), tau_rank);

    ZeroLimitReport rep;
    {
        const double t = (rho0.mat() * sigma.mat()).trace().real();
        rep.d0 = (t > 0.0) ? ExtendedReal::finite(-std::log(t)) : ExtendedReal::infinity();
    }

    // Select, cluster by cluster over sigma's descending eigenspaces, the
    // positions whose rho^0-images enlarge the span; P0 projects onto the
    // corresponding source vectors inside those eigenspaces.
    const SpectralDecomposition sd = group_spectrum(sigma.psd(), tau_group);
    double max_norm = 0.0;
    std::vector<std::vector<std::vector<cplx>>> images(sd.values.size());
    for (std::size_t c = 0; c < sd.values.size(); ++c)
        for (std::size_t j = 0; j < sd.bases[c].cols(); ++j) {
            images[c].push_back(rho0.mat().apply(sd.bases[c].column(j)));
            max_norm = std::max(max_norm, dot_abs(images[c].back()));
        }
    const double cut = std::max(tau_rank * max_norm, tol::abs_floor);

    Matrix p0(n, n);
    double q0 = 0.0;
    std::vector<std::vector<cplx>> kept;
    for (std::size_t c = 0; c < sd.values.size(); ++c) {
        for (std::size_t j = 0; j < images[c].size(); ++j) {
            std::vector<cplx> r = images[c][j];
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& u : kept) {
                    const cplx w = inner(u, r);
                    for (std::size_t i = 0; i < n; ++i) r[i] -= w * u[i];
                }
            const double rn = dot_abs(r);
            if (rn <= cut) continue;
            for (auto& x : r) x /= rn;
            kept.push_back(std::move(r));
            const auto src = sd.bases[c].column(j);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t i2 = 0; i2 < n; ++i2)
                    p0(i, i2) += src[i] * std::conj(src[i2]);
            q0 += sd.values[c];
        }
    }
    rep.witness = Projection::from(HermitianMatrix::symmetrized(p0));
    rep.q0_tilde = q0;
    rep.d0_tilde = (q0 > 0.0) ? ExtendedReal::finite(-std::log(q0)) : ExtendedReal::infinity();

    const Matrix comm = rho0.mat() * sigma.mat() - sigma.mat() * rho0.mat();
    rep.commutes = spectral_norm(comm) <= 1e-9;
    if (rep.d0.infinite || rep.d0_tilde.infinite) {
        rep.equality = rep.d0.infinite && rep.d0_tilde.infinite;
    } else {
        rep.equality = std::abs(rep.d0.value - rep.d0_tilde.value) <= 1e-9;
    }
    return rep;
}

double q0_brute(const DensityMatrix& rho, const DensityMatrix& sigma, Execution exec,
                double tau_rank, double tau_group) {
    if (rho.n() != sigma.n()) throw DimensionMismatch("q0_brute: dimension mismatch");
    if (rho.n() > 6) throw TooLarge("q0_brute enumerates subsets; n must be <= 6");
    const Projection rho0 = range_projection(rho.psd(), tau_rank);
    const SpectralDecomposition sd = group_spectrum(sigma.psd(), tau_group);
    const std::size_t nc = sd.values.size();

    // Admissible projections commute with sigma, so they decompose as one
    // sub-projection per eigenvalue cluster; within a cluster only the rank
    // enters the objective Tr(P sigma). A rank vector (r_1..r_nc) is
    // feasible iff for every cluster subset T the images rho^0(span of T)
    // have rank >= sum_{T} r_c  (Hall/Rado condition for an independent
    // transversal of subspaces).
    std::vector<std::size_t> mult(nc);
    for (std::size_t c = 0; c < nc; ++c) mult[c] = sd.bases[c].cols();

    // Precompute rank of rho^0 images over every cluster subset.
    const std::size_t nsub = std::size_t{1} << nc;
    std::vector<std::size_t> subset_rank(nsub, 0);
    for (std::size_t mask = 1; mask < nsub; ++mask) {
        std::vector<std::vector<cplx>> cols;
        for (std::size_t c = 0; c < nc; ++c) {
            if (!(mask & (std::size_t{1} << c))) continue;
            for (std::size_t j = 0; j < mult[c]; ++j)
                cols.push_back(rho0.mat().apply(sd.bases[c].column(j)));
        }
        subset_rank[mask] = gram_schmidt_select(cols, tau_rank).indices.size();
    }

    // Enumerate rank vectors mixed-radix; deterministic max over the value.
    std::size_t total = 1;
    for (std::size_t c = 0; c < nc; ++c) total *= mult[c] + 1;

    auto value_of = [&](std::size_t code) -> double {
        std::vector<std::size_t> r(nc);
        std::size_t rest = code;
        for (std::size_t c = 0; c < nc; ++c) {
            r[c] = rest % (mult[c] + 1);
            rest /= mult[c] + 1;
        }
        for (std::size_t mask = 1; mask < nsub; ++mask) {
            std::size_t want = 0;
            for (std::size_t c = 0; c < nc; ++c)
                if (mask & (std::size_t{1} << c)) want += r[c];
            if (want > subset_rank[mask]) return -1.0; // infeasible
        }
        double v = 0.0;
        for (std::size_t c = 0; c < nc; ++c) v += static_cast<double>(r[c]) * sd.values[c];
        return v;
    };

    double best = 0.0;
    if (exec == Execution::parallel) {
#if defined(KATOLIM_HAVE_OPENMP)
#pragma omp parallel for reduction(max : best) schedule(static)
        for (long long code = 0; code < static_cast<long long>(total); ++code)
            best = std::max(best, value_of(static_cast<std::size_t>(code)));
#else
        for (std::size_t code = 0; code < total; ++code) best = std::max(best, value_of(code));
#endif
    } else {
        for (std::size_t code = 0; code < total; ++code) best = std::max(best, value_of(code));
    }
    return best;
}

std::vector<double> alt_trace_monotone(const Projection& rho0, const DensityMatrix& sigma,
                                       const std::vector<double>& p_grid) {
    if (rho0.n() != sigma.n()) throw DimensionMismatch("alt_trace_monotone: dimension mismatch");
    if (p_grid.size() < 2) throw BadGrid("alt_trace_monotone needs at least two grid points");
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (p_grid[i] <= p_grid[i - 1]) throw BadGrid("p grid must be strictly increasing");
    if (p_grid.front() <= 0.0) throw BadGrid("p grid must be positive");

    const std::size_t n = sigma.n();
    const EigResult eg = eig_hermitian(sigma.psd().herm());
    const double cut = tol::rank * std::max(eg.values.front(), 0.0);

    std::vector<double> out;
    out.reserve(p_grid.size());
    for (double p : p_grid) {
        // Tr (rho^0 sigma^p rho^0)^{1/p} = sum_k sigma_k^{2/p} from the
        // graded factor [rho^0 v_j * a_j^{p/2}].
        std::vector<GradedColumn> cols;
        for (std::size_t j = 0; j < n; ++j) {
            if (eg.values[j] <= cut) continue;
            GradedColumn c;
            c.content = rho0.mat().apply(eg.vectors.column(j));
            c.log2_scale = 0.5 * p * std::log2(eg.values[j]);
            cols.push_back(std::move(c));
        }
        const std::size_t rank = graded_rank(cols, tol::rank);
        const GradedSvd svd = graded_svd(cols, rank);
        double tr = 0.0;
        for (double lg : svd.log2_sigma)
            if (std::isfinite(lg)) tr += std::exp2(2.0 * lg / p);
        out.push_back(tr);
    }
    return out;
}

} // namespace katolim
