#include "katolim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "katolim/errors.hpp"
#include "katolim/graded.hpp"

namespace katolim {

namespace {

void check_grid(const std::vector<double>& g) {
    if (g.empty()) throw BadGrid("empty p grid");
    if (g.front() < 1.0 || g.back() > 16384.0) throw BadGrid("p grid must lie in [1, 2^14]");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (g[i] <= g[i - 1]) throw BadGrid("p grid must be strictly increasing");
}

Matrix assemble(std::size_t n, const std::vector<double>& values, const Matrix& vectors,
                const std::vector<std::size_t>& which) {
    Matrix out(n, n);
    for (std::size_t t = 0; t < which.size(); ++t) {
        const std::size_t k = which[t];
        const double v = values[t];
        if (v == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += v * vectors(i, k) * std::conj(vectors(j, k));
    }
    return out;
}

// Runs one evaluation per grid point, serial or OpenMP; exceptions from
// worker threads are rethrown on the caller.
template <typename F>
void for_each_point(std::size_t count, Execution exec, F&& f) {
    if (exec == Execution::parallel) {
#if defined(KATOLIM_HAVE_OPENMP)
        std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            try {
                f(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
#endif
    }
    for (std::size_t i = 0; i < count; ++i) f(i);
}

ConvergenceReport finalize(std::vector<double> grid, std::vector<HermitianMatrix> iterates,
                           const std::optional<HermitianMatrix>& target) {
    ConvergenceReport rep;
    rep.p_grid = std::move(grid);
    rep.iterates = std::move(iterates);
    rep.target = target;
    const std::size_t n = rep.iterates.front().n();
    rep.eigenvalue_tracks.reserve(rep.iterates.size());
    for (const auto& it : rep.iterates)
        rep.eigenvalue_tracks.push_back(eig_hermitian(it).values);
    if (target) {
        if (target->n() != n) throw DimensionMismatch("sweep target dimension mismatch");
        for (const auto& it : rep.iterates)
            rep.errors.push_back(spectral_norm(it.mat() - target->mat()));
    }

    double dec_violation = 0.0, inc_violation = 0.0;
    for (std::size_t k = 0; k + 1 < rep.iterates.size(); ++k) {
        const Matrix d = rep.iterates[k + 1].mat() - rep.iterates[k].mat();
        const EigResult eg = eig_hermitian(HermitianMatrix::symmetrized(d));
        dec_violation = std::max(dec_violation, std::max(0.0, eg.values.front()));
        inc_violation = std::max(inc_violation, std::max(0.0, -eg.values.back()));
    }
    if (rep.iterates.size() >= 2) {
        if (dec_violation <= 1e-8) {
            rep.monotone_flag = MonotoneFlag::decreasing;
            rep.max_violation = dec_violation;
        } else if (inc_violation <= 1e-8) {
            rep.monotone_flag = MonotoneFlag::increasing;
            rep.max_violation = inc_violation;
        } else {
            rep.monotone_flag = MonotoneFlag::none;
            rep.max_violation = std::min(dec_violation, inc_violation);
        }
        rep.cauchy_delta = spectral_norm(rep.iterates.back().mat() -
                                         rep.iterates[rep.iterates.size() - 2].mat());
    }
    return rep;
}

struct MapFactor {
    std::vector<std::vector<cplx>> contents; // K_i v_j, zero columns dropped
    std::vector<double> log2_values;         // log2 a_j per kept column
    std::size_t rank = 0;
    std::size_t out_dim = 0;
};

MapFactor map_factor(const PositiveMapSpec& phi, const PSDMatrix& a) {
    if (phi.in_dim() != a.n()) throw DimensionMismatch("sweep: map/input dimension mismatch");
    MapFactor f;
    f.out_dim = phi.out_dim();
    const EigResult eg = eig_hermitian(a.herm());
    const double cut = tol::rank * std::max(eg.values.front(), 0.0);
    const std::vector<Matrix> kraus = phi.to_kraus();
    for (std::size_t j = 0; j < a.n(); ++j) {
        if (eg.values[j] <= cut) continue; // kernel: contributes nothing under support powers
        for (const auto& k : kraus) {
            auto col = k.apply(eg.vectors.column(j));
            if (dot_abs(col) == 0.0) continue;
            f.contents.push_back(std::move(col));
            f.log2_values.push_back(std::log2(eg.values[j]));
        }
    }
    f.rank = gram_schmidt_select(f.contents, tol::rank).indices.size();
    return f;
}

HermitianMatrix map_iterate(const MapFactor& f, double p, double sign) {
    std::vector<GradedColumn> cols(f.contents.size());
    for (std::size_t t = 0; t < f.contents.size(); ++t) {
        cols[t].content = f.contents[t];
        cols[t].log2_scale = sign * 0.5 * p * f.log2_values[t];
    }
    const GradedSvd svd = graded_svd(cols, f.rank);
    std::vector<double> values;
    std::vector<std::size_t> which;
    for (std::size_t k = 0; k < svd.log2_sigma.size(); ++k) {
        if (!std::isfinite(svd.log2_sigma[k])) continue;
        values.push_back(std::exp2(sign * 2.0 * svd.log2_sigma[k] / p));
        which.push_back(k);
    }
    return HermitianMatrix::symmetrized(assemble(f.out_dim, values, svd.vectors, which));
}

ConvergenceReport sweep_map_impl(const PositiveMapSpec& phi, const PSDMatrix& a,
                                 const std::vector<double>& grid,
                                 const std::optional<HermitianMatrix>& target, Execution exec,
                                 double sign) {
    check_grid(grid);
    const MapFactor f = map_factor(phi, a);
    std::vector<HermitianMatrix> iterates(grid.size());
    for_each_point(grid.size(), exec,
                   [&](std::size_t i) { iterates[i] = map_iterate(f, grid[i], sign); });
    return finalize(grid, std::move(iterates), target);
}

} // namespace

std::vector<double> default_grid(double p_max) {
    std::vector<double> g;
    for (double p = 1.0; p <= p_max; p *= 2.0) g.push_back(p);
    if (g.empty()) throw BadGrid("p_max below 1");
    return g;
}

ConvergenceReport sweep_map(const PositiveMapSpec& phi, const PSDMatrix& a,
                            const std::vector<double>& p_grid,
                            const std::optional<HermitianMatrix>& target, Execution exec) {
    return sweep_map_impl(phi, a, p_grid, target, exec, +1.0);
}

ConvergenceReport sweep_neg_map(const PositiveMapSpec& phi, const PSDMatrix& a,
                                const std::vector<double>& p_grid,
                                const std::optional<HermitianMatrix>& target, Execution exec) {
    return sweep_map_impl(phi, a, p_grid, target, exec, -1.0);
}

namespace {

bool is_projection_matrix(const PSDMatrix& b) {
    const Matrix p2 = b.mat() * b.mat();
    return (p2 - b.mat()).max_abs() <= tol::proj;
}

// (A^p sigma_f E)^{1/p} from the graded factor of E A^{-p} E; kernel
// directions of A ride on the infinite tier and vanish under f_hat.
HermitianMatrix mean_iterate_fhat(const MeanSpec& spec, const EigResult& ega, double cut,
                                  const Matrix& e, double p) {
    const std::size_t n = e.rows();
    std::vector<GradedColumn> cols;
    for (std::size_t j = 0; j < n; ++j) {
        GradedColumn c;
        c.content = e.apply(ega.vectors.column(j));
        if (dot_abs(c.content) == 0.0) continue;
        if (ega.values[j] <= cut) {
            c.infinite = true;
        } else {
            c.log2_scale = -0.5 * p * std::log2(ega.values[j]);
        }
        cols.push_back(std::move(c));
    }
    const std::size_t rank = graded_rank(cols, tol::rank);
    const GradedSvd svd = graded_svd(cols, rank);
    std::vector<double> values;
    std::vector<std::size_t> which;
    for (std::size_t k = 0; k < svd.log2_sigma.size(); ++k) {
        if (!std::isfinite(svd.log2_sigma[k]) || svd.infinite[k]) continue;
        const XReal fh = f_hat_extended(spec, XReal::exp2x(2.0 * svd.log2_sigma[k]));
        if (fh.is_zero() || fh.sign() < 0) continue;
        values.push_back(std::exp2(fh.log2_abs() / p));
        which.push_back(k);
    }
    return HermitianMatrix::symmetrized(assemble(n, values, svd.vectors, which));
}

// ((1-a) A^p + a B)^{1/p} from the powered-sum factor.
HermitianMatrix mean_iterate_arithmetic(double alpha, const EigResult& ega, double cut,
                                        const PSDMatrix& b, double p) {
    const std::size_t n = b.n();
    std::vector<GradedColumn> cols;
    const double wa = std::sqrt(1.0 - alpha);
    for (std::size_t j = 0; j < n; ++j) {
        if (ega.values[j] <= cut) continue;
        GradedColumn c;
        c.content = ega.vectors.column(j);
        for (auto& x : c.content) x *= wa;
        c.log2_scale = 0.5 * p * std::log2(ega.values[j]);
        cols.push_back(std::move(c));
    }
    const EigResult egb = eig_hermitian(b.herm());
    const double cutb = tol::rank * std::max(egb.values.front(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (egb.values[j] <= cutb) continue;
        GradedColumn c;
        c.content = egb.vectors.column(j);
        const double w = std::sqrt(alpha * egb.values[j]);
        for (auto& x : c.content) x *= w;
        cols.push_back(std::move(c));
    }
    const std::size_t rank = graded_rank(cols, tol::rank);
    const GradedSvd svd = graded_svd(cols, rank);
    std::vector<double> values;
    std::vector<std::size_t> which;
    for (std::size_t k = 0; k < svd.log2_sigma.size(); ++k) {
        if (!std::isfinite(svd.log2_sigma[k])) continue;
        values.push_back(std::exp2(2.0 * svd.log2_sigma[k] / p));
        which.push_back(k);
    }
    return HermitianMatrix::symmetrized(assemble(n, values, svd.vectors, which));
}

// Direct route: (mean_eval(spec, A^p, B))^{1/p} in ordinary arithmetic.
// The root runs over the support of the mean, identified by rank (it equals
// rank(B) when f vanishes at zero and is full otherwise): kernel
// eigenvalues come out of the eigensolver as roundoff, and roundoff^{1/p}
// is order one.
HermitianMatrix mean_iterate_direct(const MeanSpec& spec, const PSDMatrix& a,
                                    const PSDMatrix& b, double p) {
    const PSDMatrix ap = matrix_power(a, p);
    const PSDMatrix m = mean_eval(spec, ap, b);
    const EigResult eg = eig_hermitian(m.herm());
    const std::size_t n = m.n();
    std::size_t rank_m = n;
    if (spec.f_at_zero() == 0.0) {
        const EigResult egb = eig_hermitian(b.herm());
        const double cutb = tol::rank * std::max(egb.values.front(), 0.0);
        rank_m = 0;
        while (rank_m < n && egb.values[rank_m] > cutb) ++rank_m;
    }
    Matrix out(n, n);
    for (std::size_t k = 0; k < rank_m; ++k) {
        if (eg.values[k] <= 0.0) continue;
        const double v = std::pow(eg.values[k], 1.0 / p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += v * eg.vectors(i, k) * std::conj(eg.vectors(j, k));
    }
    return HermitianMatrix::symmetrized(out);
}

} // namespace

ConvergenceReport sweep_mean(const MeanSpec& spec, const PSDMatrix& a, const PSDMatrix& b,
                             const std::vector<double>& p_grid,
                             const std::optional<HermitianMatrix>& target, Execution exec) {
    check_grid(p_grid);
    if (a.n() != b.n()) throw DimensionMismatch("sweep_mean: dimension mismatch");

    const EigResult ega = eig_hermitian(a.herm());
    const double cut = tol::rank * std::max(ega.values.front(), 0.0);
    double max_abs_log = 0.0;
    for (double v : ega.values)
        if (v > cut) max_abs_log = std::max(max_abs_log, std::abs(std::log2(v)));

    const bool b_is_projection = is_projection_matrix(b);
    const bool vanishing_builtin =
        spec.f_at_zero() == 0.0 && spec.kind() != MeanSpec::Kind::custom;
    const bool arithmetic = spec.kind() == MeanSpec::Kind::arithmetic;

    double spread_log = 0.0; // log2 condition number over the support
    {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double v : ega.values)
            if (v > cut) {
                lo = std::min(lo, std::log2(v));
                hi = std::max(hi, std::log2(v));
            }
        if (std::isfinite(hi)) spread_log = hi - lo;
    }
    // The direct route loses the small eigenvalues of the mean once the
    // powered condition number reaches the working precision.
    auto direct_ok = [&](double p) {
        return p <= 32.0 && p * max_abs_log <= 200.0 && p * spread_log <= 45.0;
    };

    std::vector<HermitianMatrix> iterates(p_grid.size());
    for_each_point(p_grid.size(), exec, [&](std::size_t i) {
        const double p = p_grid[i];
        if (vanishing_builtin && b_is_projection) {
            iterates[i] = mean_iterate_fhat(spec, ega, cut, b.mat(), p);
        } else if (arithmetic) {
            iterates[i] = mean_iterate_arithmetic(spec.alpha(), ega, cut, b, p);
        } else if (direct_ok(p)) {
            iterates[i] = mean_iterate_direct(spec, a, b, p);
        } else {
            throw DomainError(
                "sweep_mean at p=" + std::to_string(p) +
                " needs a builtin mean with f(0)=0 and a projection B (or the "
                "arithmetic mean); the direct route is limited to small p");
        }
    });
    return finalize(p_grid, std::move(iterates), target);
}

ConvergenceReport sweep_inf(const PSDMatrix& a, const PSDMatrix& b,
                            const std::vector<double>& p_grid,
                            const std::optional<HermitianMatrix>& target, Execution exec) {
    check_grid(p_grid);
    if (a.n() != b.n()) throw DimensionMismatch("sweep_inf: dimension mismatch");
    const std::size_t n = a.n();
    const EigResult ega = eig_hermitian(a.herm());
    const EigResult egb = eig_hermitian(b.herm());
    const double cuta = tol::rank * std::max(ega.values.front(), 0.0);
    const double cutb = tol::rank * std::max(egb.values.front(), 0.0);
    const double w = 1.0 / std::sqrt(2.0);

    auto iterate_at = [&](double p) {
        // ((A^{-p} + B^{-p})/2)^{-1/p}; kernels of either argument ride the
        // infinite tier and the inverse sends them to exact zero.
        std::vector<GradedColumn> cols;
        auto add = [&](const EigResult& eg, double cut) {
            for (std::size_t j = 0; j < n; ++j) {
                GradedColumn c;
                c.content = eg.vectors.column(j);
                for (auto& x : c.content) x *= w;
                if (eg.values[j] <= cut) {
                    c.infinite = true;
                } else {
                    c.log2_scale = -0.5 * p * std::log2(eg.values[j]);
                }
                cols.push_back(std::move(c));
            }
        };
        add(ega, cuta);
        add(egb, cutb);
        const std::size_t rank = graded_rank(cols, tol::rank);
        const GradedSvd svd = graded_svd(cols, rank);
        std::vector<double> values;
        std::vector<std::size_t> which;
        for (std::size_t k = 0; k < svd.log2_sigma.size(); ++k) {
            if (!std::isfinite(svd.log2_sigma[k]) || svd.infinite[k]) continue;
            values.push_back(std::exp2(-2.0 * svd.log2_sigma[k] / p));
            which.push_back(k);
        }
        return HermitianMatrix::symmetrized(assemble(n, values, svd.vectors, which));
    };

    std::vector<HermitianMatrix> iterates(p_grid.size());
    for_each_point(p_grid.size(), exec, [&](std::size_t i) { iterates[i] = iterate_at(p_grid[i]); });
    return finalize(p_grid, std::move(iterates), target);
}

ConvergenceReport sweep_sandwich(const PSDMatrix& a, const PSDMatrix& b,
                                 const std::vector<double>& p_grid, Execution exec) {
    check_grid(p_grid);
    if (a.n() != b.n()) throw DimensionMismatch("sweep_sandwich: dimension mismatch");
    const std::size_t n = a.n();
    const EigResult ega = eig_hermitian(a.herm());
    const double cut = tol::rank * std::max(ega.values.front(), 0.0);
    const HermitianMatrix bhalf = apply_function(
        b.herm(), [](double x) { return std::sqrt(std::max(x, 0.0)); });
    // A^p B A^p = (V M)(V M)* with M = D^p (V* B^{1/2}); the SVD runs on
    // M*, whose columns carry the a_j^p scales. Column j of M* pairs with
    // eigenvector column j of V, so kernel columns of A are dropped from
    // both sides together.
    const Matrix t = ega.vectors.adjoint() * bhalf.mat();

    std::vector<std::vector<cplx>> contents;
    std::vector<double> logs;
    std::vector<std::size_t> support_cols;
    for (std::size_t j = 0; j < n; ++j) {
        if (ega.values[j] <= cut) continue;
        std::vector<cplx> col(t.cols());
        for (std::size_t i = 0; i < t.cols(); ++i) col[i] = std::conj(t(j, i));
        contents.push_back(std::move(col));
        logs.push_back(std::log2(ega.values[j]));
        support_cols.push_back(j);
    }
    Matrix vsub(n, support_cols.size());
    for (std::size_t j = 0; j < support_cols.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) vsub(i, j) = ega.vectors(i, support_cols[j]);
    const std::size_t rank = gram_schmidt_select(contents, tol::rank).indices.size();

    auto iterate_at = [&](double p) {
        std::vector<GradedColumn> cols(contents.size());
        for (std::size_t j = 0; j < contents.size(); ++j) {
            cols[j].content = contents[j];
            cols[j].log2_scale = p * logs[j];
        }
        const GradedSvd svd = graded_svd(cols, rank, /*want_right=*/true);
        // Eigenvectors of A^p B A^p are V (over the support) times the
        // accumulated rotations.
        const Matrix vr = vsub * svd.right;
        std::vector<double> values;
        std::vector<std::size_t> which;
        for (std::size_t k = 0; k < svd.log2_sigma.size(); ++k) {
            if (!std::isfinite(svd.log2_sigma[k])) continue;
            values.push_back(std::exp2(2.0 * svd.log2_sigma[k] / p));
            which.push_back(k);
        }
        return HermitianMatrix::symmetrized(assemble(n, values, vr, which));
    };

    std::vector<HermitianMatrix> iterates(p_grid.size());
    for_each_point(p_grid.size(), exec, [&](std::size_t i) { iterates[i] = iterate_at(p_grid[i]); });
    return finalize(p_grid, std::move(iterates), std::nullopt);
}

LoewnerOrder loewner_compare(const HermitianMatrix& x, const HermitianMatrix& y, double tau) {
    if (x.n() != y.n()) throw DimensionMismatch("loewner_compare: dimension mismatch");
    const Matrix d = y.mat() - x.mat();
    const EigResult eg = eig_hermitian(HermitianMatrix::symmetrized(d));
    const bool le = eg.values.back() >= -tau; // x <= y
    const bool ge = eg.values.front() <= tau; // y <= x
    if (le && ge) return LoewnerOrder::equal;
    if (le) return LoewnerOrder::less_equal;
    if (ge) return LoewnerOrder::greater_equal;
    return LoewnerOrder::incomparable;
}

std::string to_string(LoewnerOrder o) {
    switch (o) {
        case LoewnerOrder::equal: return "equal";
        case LoewnerOrder::less_equal: return "<=";
        case LoewnerOrder::greater_equal: return ">=";
        case LoewnerOrder::incomparable: return "incomparable";
    }
    return "?";
}

std::string to_string(MonotoneFlag f) {
    switch (f) {
        case MonotoneFlag::decreasing: return "decreasing";
        case MonotoneFlag::increasing: return "increasing";
        case MonotoneFlag::none: return "none";
    }
    return "?";
}

} // namespace katolim
