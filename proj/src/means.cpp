#include "katolim/means.hpp"

#include <cmath>
#include <numbers>

#include "katolim/errors.hpp"

namespace katolim {

namespace {

double log_mean_f(double x) {
    // (x-1)/log x, removable singularity at 1.
    if (std::abs(x - 1.0) < 1e-8) {
        const double d = x - 1.0;
        return 1.0 + d / 2.0 - d * d / 12.0;
    }
    return (x - 1.0) / std::log(x);
}

} // namespace

MeanSpec MeanSpec::arithmetic(double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw BadAlpha("arithmetic mean needs alpha in [0, 1]");
    MeanSpec m;
    m.kind_ = Kind::arithmetic;
    m.name_ = "arithmetic";
    m.alpha_ = alpha;
    m.f0_ = 1.0 - alpha;
    return m;
}

MeanSpec MeanSpec::geometric(double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw BadAlpha("geometric mean needs alpha in [0, 1]");
    MeanSpec m;
    m.kind_ = Kind::geometric;
    m.name_ = "geometric";
    m.alpha_ = alpha;
    m.f0_ = (alpha == 0.0) ? 1.0 : 0.0;
    return m;
}

MeanSpec MeanSpec::harmonic(double alpha) {
    if (alpha <= 0.0 || alpha > 1.0) throw BadAlpha("harmonic mean needs alpha in (0, 1]");
    MeanSpec m;
    m.kind_ = Kind::harmonic;
    m.name_ = "harmonic";
    m.alpha_ = alpha;
    m.f0_ = 0.0;
    return m;
}

MeanSpec MeanSpec::logarithmic() {
    MeanSpec m;
    m.kind_ = Kind::logarithmic;
    m.name_ = "logarithmic";
    m.alpha_ = 0.5;
    m.f0_ = 0.0;
    return m;
}

MeanSpec MeanSpec::custom(std::string name, std::function<double(double)> f,
                          double f_at_zero, double alpha) {
    MeanSpec m;
    m.kind_ = Kind::custom;
    m.name_ = std::move(name);
    m.alpha_ = alpha;
    m.f0_ = f_at_zero;
    m.fcustom_ = std::move(f);
    m.screen();
    return m;
}

void MeanSpec::screen() const {
    if (std::abs(f(1.0) - 1.0) > 1e-12)
        throw InputError("representing function must satisfy f(1) = 1");
    // Necessary conditions on a log grid: nondecreasing and concave.
    const int npts = 121;
    double prev = 0.0, prev_x = 0.0;
    double prev_slope = std::numeric_limits<double>::infinity();
    for (int i = 0; i < npts; ++i) {
        const double x = std::pow(10.0, -6.0 + 12.0 * i / (npts - 1));
        const double y = f(x);
        if (!std::isfinite(y) || y < 0.0)
            throw InputError("representing function must be finite and nonnegative");
        if (i > 0) {
            if (y < prev - 1e-9 * std::max(1.0, std::abs(prev)))
                throw InputError("representing function must be nondecreasing");
            const double slope = (y - prev) / (x - prev_x);
            if (slope > prev_slope + 1e-9 * std::max(1.0, prev_slope))
                throw InputError("representing function must be concave");
            prev_slope = slope;
        }
        prev = y;
        prev_x = x;
    }
}

double MeanSpec::f(double x) const {
    switch (kind_) {
        case Kind::arithmetic: return 1.0 - alpha_ + alpha_ * x;
        case Kind::geometric: return std::pow(x, alpha_);
        case Kind::harmonic: return x / ((1.0 - alpha_) * x + alpha_);
        case Kind::logarithmic: return log_mean_f(x);
        case Kind::custom: return fcustom_(x);
    }
    return 0.0;
}

double MeanSpec::f_tilde(double x) const { return x * f(1.0 / x); }

double MeanSpec::f_hat(double x) const {
    if (x == 0.0) return 0.0;
    return f(x) / x;
}

MeanSpec MeanSpec::transpose() const {
    switch (kind_) {
        case Kind::arithmetic: return arithmetic(1.0 - alpha_);
        case Kind::geometric: return geometric(1.0 - alpha_);
        case Kind::harmonic: return harmonic(1.0 - alpha_);
        case Kind::logarithmic: return logarithmic(); // symmetric
        case Kind::custom: {
            auto g = fcustom_;
            // f_tilde(0) = lim x f(1/x) = slope of f at infinity.
            const double f_tilde_zero = g(1e8) / 1e8;
            return custom(name_ + "~", [g](double x) { return x * g(1.0 / x); },
                          f_tilde_zero, 1.0 - alpha_);
        }
    }
    throw InputError("unknown mean kind");
}

namespace {

// A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}. With cut_to_rank set, exactly
// n - rank(B) core eigenvalues take f(0+): the congruence by A^{-1/2}
// preserves the rank of B, so the kernel of the core is identified
// structurally. Magnitude cannot tell it apart -- the kernel comes out of
// the eigensolver as roundoff relative to the top of the core, which for
// powered arguments dwarfs genuine small eigenvalues, and f of that junk
// is not f(0). The epsilon-regularized caller passes cut_to_rank = false:
// there the tiny core eigenvalues are the signal.
PSDMatrix mean_eval_pd(const MeanSpec& spec, const PSDMatrix& a, const PSDMatrix& b,
                       bool cut_to_rank) {
    const HermitianMatrix rhalf = apply_function(
        a.herm(), [](double x) { return 1.0 / std::sqrt(x); },
        [](double x) { return x > 0.0; });
    const HermitianMatrix half = apply_function(
        a.herm(), [](double x) { return std::sqrt(std::max(x, 0.0)); });
    const std::size_t n = a.n();

    std::size_t rank_b = n;
    if (cut_to_rank) {
        const EigResult egb = eig_hermitian(b.herm());
        const double cutb = tol::rank * std::max(egb.values.front(), 0.0);
        rank_b = 0;
        while (rank_b < n && egb.values[rank_b] > cutb) ++rank_b;
    }

    const Matrix core = rhalf.mat() * b.mat() * rhalf.mat();
    const EigResult eg = eig_hermitian(HermitianMatrix::symmetrized(core));
    Matrix fc(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (k < rank_b && eg.values[k] > 0.0) ? spec.f(eg.values[k])
                                                            : spec.f_at_zero();
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                fc(i, j) += w * eg.vectors(i, k) * std::conj(eg.vectors(j, k));
    }
    return PSDMatrix::from(
        HermitianMatrix::symmetrized(half.mat() * fc * half.mat()));
}

} // namespace

PSDMatrix mean_eval(const MeanSpec& spec, const PSDMatrix& a, const PSDMatrix& b) {
    if (a.n() != b.n()) throw DimensionMismatch("mean_eval: dimension mismatch");
    const EigResult eg = eig_hermitian(a.herm());
    const double top = std::max(eg.values.front(), 0.0);
    // Positive definite means "above the numerical kernel": powered inputs
    // carry genuinely tiny eigenvalues far below any fixed relative
    // tolerance, and only roundoff-level ones mark a true kernel.
    const double kernel_level = std::max(
        64.0 * static_cast<double>(a.n()) * std::numeric_limits<double>::epsilon() * top,
        tol::abs_floor);
    const bool pd = eg.values.back() > kernel_level;
    if (pd) return mean_eval_pd(spec, a, b, /*cut_to_rank=*/true);

    // Singular A: decreasing epsilon-limit of (A + eps) sigma (B + eps).
    const Matrix id = Matrix::identity(a.n());
    Matrix prev;
    bool have_prev = false;
    for (int k = 1; k <= 12; ++k) {
        const double eps = std::pow(10.0, -k);
        const PSDMatrix ae = PSDMatrix::from(HermitianMatrix::symmetrized(a.mat() + eps * id));
        const PSDMatrix be = PSDMatrix::from(HermitianMatrix::symmetrized(b.mat() + eps * id));
        const Matrix cur = mean_eval_pd(spec, ae, be, /*cut_to_rank=*/false).mat();
        if (have_prev && spectral_norm(prev - cur) <= 1e-9) {
            return PSDMatrix::from(HermitianMatrix::symmetrized(cur));
        }
        prev = cur;
        have_prev = true;
        if (k == 12) {
            // Accept slow-but-settling tails; stalled ones are an error.
            const PSDMatrix aeps = PSDMatrix::from(
                HermitianMatrix::symmetrized(a.mat() + (eps / 2.0) * id));
            const PSDMatrix beps = PSDMatrix::from(
                HermitianMatrix::symmetrized(b.mat() + (eps / 2.0) * id));
            const double delta =
                spectral_norm(mean_eval_pd(spec, aeps, beps, /*cut_to_rank=*/false).mat() - cur);
            if (delta > 1e-6) {
                throw NoConvergence("mean_eval: epsilon-limit stalled with delta " +
                                    std::to_string(delta));
            }
        }
    }
    return PSDMatrix::from(HermitianMatrix::symmetrized(prev));
}

PSDMatrix mean_projection_eval(const MeanSpec& spec, const PSDMatrix& a, const Projection& e) {
    if (a.n() != e.n()) throw DimensionMismatch("mean_projection_eval: dimension mismatch");
    if (spec.f_at_zero() != 0.0)
        throw RequiresVanishingAtZero("mean_projection_eval needs f(0) = 0 (got " +
                                      std::to_string(spec.f_at_zero()) + ")");
    const EigResult eg = eig_hermitian(a.herm());
    if (eg.values.back() <= tol::rank * std::max(eg.values.front(), 1.0))
        throw RequiresPositiveDefinite("mean_projection_eval needs positive definite A");
    const HermitianMatrix ainv = apply_function(a.herm(), [](double x) { return 1.0 / x; });
    const Matrix core = e.mat() * ainv.mat() * e.mat();
    const HermitianMatrix ch = HermitianMatrix::symmetrized(core);
    // f_hat(0) = 0 by definition; the kernel of E A^{-1} E is identified at
    // the relative rank tolerance, not at exact zero.
    const double cut = tol::rank * std::max(max_eigenvalue(ch), 0.0);
    const HermitianMatrix out = apply_function(
        ch, [&](double x) { return x <= cut ? 0.0 : spec.f_hat(x); });
    return PSDMatrix::from(out);
}

PSDMatrix geometric_limit(const PSDMatrix& a, const PSDMatrix& b, double alpha,
                          double tau_rank, double tau_group) {
    if (a.n() != b.n()) throw DimensionMismatch("geometric_limit: dimension mismatch");
    if (alpha < 0.0 || alpha > 1.0) throw BadAlpha("geometric_limit needs alpha in [0, 1]");
    if (alpha == 0.0) return a;
    const Projection e = range_projection(b, tau_rank);
    if (alpha == 1.0) return PSDMatrix::from(e.herm());

    const std::size_t n = a.n();
    const SpectralDecomposition sd = group_spectrum(a, tau_group);
    Matrix out(n, n);
    Matrix acc(n, n);
    Projection prev_meet = Projection::zero(n);
    for (std::size_t k = 0; k < sd.values.size(); ++k) {
        acc += sd.projections[k].mat();
        const Projection meet =
            projection_meet(Projection::from(HermitianMatrix::symmetrized(acc)), e, tau_rank);
        out += std::pow(sd.values[k], 1.0 - alpha) * (meet.mat() - prev_meet.mat());
        prev_meet = meet;
    }
    return PSDMatrix::from(HermitianMatrix::symmetrized(out));
}

PowerMonotonicity classify_power_monotonicity(const MeanSpec& spec) {
    const int npts = 60;
    bool pmi = true, pmd = true;
    for (double r : {1.5, 2.0, 4.0}) {
        for (int i = 0; i < npts; ++i) {
            const double x = std::pow(10.0, -3.0 + 6.0 * i / (npts - 1));
            const double lhs = spec.f(std::pow(x, r));
            const double rhs = std::pow(spec.f(x), r);
            const double slack = 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
            if (lhs < rhs - slack) pmi = false;
            if (lhs > rhs + slack) pmd = false;
        }
    }
    if (pmi && pmd) return PowerMonotonicity::both;
    if (pmi) return PowerMonotonicity::pmi;
    if (pmd) return PowerMonotonicity::pmd;
    return PowerMonotonicity::neither;
}

std::string to_string(PowerMonotonicity c) {
    switch (c) {
        case PowerMonotonicity::pmi: return "pmi";
        case PowerMonotonicity::pmd: return "pmd";
        case PowerMonotonicity::both: return "both";
        case PowerMonotonicity::neither: return "neither";
    }
    return "?";
}

FTildeInfinity f_tilde_infinity(const MeanSpec& spec, double x) {
    if (x < 0.0) throw DomainError("f_tilde_infinity needs x >= 0");
    switch (spec.kind()) {
        case MeanSpec::Kind::arithmetic:
            return {x == 0.0 ? 1.0 : std::max(x, 1.0), 0.0};
        case MeanSpec::Kind::geometric:
            return {std::pow(x, 1.0 - spec.alpha()), 0.0};
        case MeanSpec::Kind::harmonic:
            return {std::min(x, 1.0), 0.0};
        case MeanSpec::Kind::logarithmic:
            return {x == 0.0 ? 0.0 : std::max(x, 1.0), 0.0};
        case MeanSpec::Kind::custom:
            break;
    }
    // Numeric estimate: f_tilde(x^p)^{1/p} = x f(x^{-p})^{1/p}, with p capped
    // so x^{-p} stays representable.
    if (x == 0.0 || x == 1.0) return {spec.f_tilde(x == 0.0 ? 0.0 : 1.0), 0.0};
    auto estimate = [&](double p) {
        const double arg = std::exp(-p * std::log(x));
        const double fx = spec.f(arg);
        if (fx <= 0.0) return 0.0;
        return x * std::exp(std::log(fx) / p);
    };
    const double pcap = 600.0 / std::abs(std::log(x));
    const double p_hi = std::min(4096.0, pcap);
    const double p_lo = p_hi / 4.0;
    const double v_hi = estimate(p_hi);
    const double v_lo = estimate(p_lo);
    const double err = std::abs(v_hi - v_lo);
    if (err > 1e-6 * std::max(1.0, std::abs(v_hi))) {
        throw NoConvergence("f_tilde_infinity estimate not Cauchy: delta " +
                            std::to_string(err));
    }
    return {v_hi, err};
}

XReal f_hat_extended(const MeanSpec& spec, const XReal& x) {
    if (x.is_zero()) return XReal{};
    switch (spec.kind()) {
        case MeanSpec::Kind::geometric:
            return xpow(x, spec.alpha() - 1.0);
        case MeanSpec::Kind::harmonic:
            // 1 / ((1-a) x + a)
            return XReal::from(1.0) /
                   (XReal::from(1.0 - spec.alpha()) * x + XReal::from(spec.alpha()));
        case MeanSpec::Kind::logarithmic: {
            const double l2 = x.log2_abs();
            if (std::abs(l2) < 500.0) {
                return XReal::from(spec.f_hat(x.to_double()));
            }
            // (1 - 1/x) / ln x with ln x of magnitude |l2| ln 2.
            const XReal num = XReal::from(1.0) - XReal::from(1.0) / x;
            return num / XReal::from(l2 * std::numbers::ln2);
        }
        default:
            break;
    }
    const double l2 = x.log2_abs();
    if (std::abs(l2) > 900.0)
        throw DomainError("extended-range f_hat is only available for builtin means");
    return XReal::from(spec.f_hat(x.to_double()));
}

} // namespace katolim
