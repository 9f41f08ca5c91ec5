#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "katolim/errors.hpp"
#include "katolim/means.hpp"

using namespace katolim;
using kt::Rng;

namespace {

Matrix half_projection() {
    Matrix q(2, 2);
    q(0, 0) = q(0, 1) = q(1, 0) = q(1, 1) = 0.5;
    return q;
}

// (A^p sigma E)^{1/p} evaluated directly at small p; the root runs over
// the support of the mean (rank of B for vanishing means) so kernel
// roundoff cannot blow up under 1/p.
Matrix small_p_iterate(const MeanSpec& spec, const PSDMatrix& a, const PSDMatrix& b, double p) {
    const PSDMatrix m = mean_eval(spec, matrix_power(a, p), b);
    const EigResult eg = eig_hermitian(m.herm());
    const std::size_t n = m.n();
    std::size_t rank_m = n;
    if (spec.f_at_zero() == 0.0) {
        rank_m = range_projection(b).rank();
    }
    Matrix out(n, n);
    for (std::size_t k = 0; k < rank_m; ++k) {
        if (eg.values[k] <= 0.0) continue;
        const double v = std::pow(eg.values[k], 1.0 / p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += v * eg.vectors(i, k) * std::conj(eg.vectors(j, k));
    }
    return out;
}

} // namespace

TEST_SUITE("mean_eval") {
    TEST_CASE("every mean of A with itself is A") {
        Rng rng(31);
        const PSDMatrix a = kt::random_psd_gapped(3, rng);
        for (const auto& spec : {MeanSpec::arithmetic(0.3), MeanSpec::geometric(0.5),
                                 MeanSpec::harmonic(0.7), MeanSpec::logarithmic()}) {
            CHECK(kt::spectral_dist(mean_eval(spec, a, a).mat(), a.mat()) < 1e-10);
        }
    }

    TEST_CASE("commuting geometric mean is the scalar power mean") {
        for (double alpha : {0.25, 0.5, 0.75}) {
            const auto r = mean_eval(MeanSpec::geometric(alpha), kt::psd(kt::diag({4.0, 1.0})),
                                     kt::psd(kt::diag({1.0, 4.0})));
            CHECK(kt::dist(r.mat(), kt::diag({std::pow(4.0, 1.0 - alpha), std::pow(4.0, alpha)})) <
                  1e-12);
        }
    }

    TEST_CASE("harmonic mean of scalar multiples of the identity") {
        const auto r = mean_eval(MeanSpec::harmonic(0.5), kt::psd(2.0 * Matrix::identity(2)),
                                 kt::psd(Matrix::identity(2)));
        CHECK(kt::dist(r.mat(), (4.0 / 3.0) * Matrix::identity(2)) < 1e-12);
    }

    TEST_CASE("singular arguments go through the epsilon limit") {
        const PSDMatrix p = kt::psd(kt::diag({1.0, 0.0}));
        const auto r = mean_eval(MeanSpec::harmonic(0.5), p, p);
        CHECK(kt::spectral_dist(r.mat(), p.mat()) < 1e-5);
    }

    TEST_CASE("transpose symmetry") {
        Rng rng(32);
        for (const auto& spec : {MeanSpec::arithmetic(0.3), MeanSpec::geometric(0.7),
                                 MeanSpec::harmonic(0.4), MeanSpec::logarithmic()}) {
            for (int rep = 0; rep < 5; ++rep) {
                const PSDMatrix a = kt::random_psd_gapped(3, rng);
                const PSDMatrix b = kt::random_psd_gapped(3, rng);
                const Matrix lhs = mean_eval(spec, a, b).mat();
                const Matrix rhs = mean_eval(spec.transpose(), b, a).mat();
                CHECK(kt::spectral_dist(lhs, rhs) < 1e-10);
            }
        }
    }

    TEST_CASE("congruence invariance of the weighted geometric mean") {
        Rng rng(33);
        const auto spec = MeanSpec::geometric(0.3);
        for (int rep = 0; rep < 5; ++rep) {
            const PSDMatrix a = kt::random_psd_gapped(3, rng);
            const PSDMatrix b = kt::random_psd_gapped(3, rng);
            const Matrix u = kt::random_unitary(3, rng);
            auto rot = [&](const PSDMatrix& x) {
                return PSDMatrix::from(HermitianMatrix::symmetrized(u * x.mat() * u.adjoint()));
            };
            const Matrix lhs = mean_eval(spec, rot(a), rot(b)).mat();
            const Matrix rhs = u * mean_eval(spec, a, b).mat() * u.adjoint();
            CHECK(kt::spectral_dist(lhs, rhs) < 1e-10);
        }
    }
}

TEST_SUITE("mean_projection_eval") {
    TEST_CASE("weighted geometric mean against the half projection") {
        const auto r = mean_projection_eval(MeanSpec::geometric(0.5),
                                            kt::psd(kt::diag({4.0, 1.0})),
                                            kt::proj(half_projection()));
        const double want = std::pow(5.0 / 8.0, -0.5);
        CHECK(kt::spectral_dist(r.mat(), want * half_projection()) < 1e-12);
        CHECK(want == doctest::Approx(1.2649110640673518));
    }

    TEST_CASE("full projection reduces to the scalar mean per eigenvalue") {
        Rng rng(34);
        const PSDMatrix a = kt::random_psd_gapped(3, rng);
        const auto spec = MeanSpec::harmonic(0.35);
        const auto r = mean_projection_eval(spec, a, kt::proj(Matrix::identity(3)));
        const Matrix want =
            apply_function(a.herm(), [&](double x) { return spec.f(1.0 / x) * x; }).mat();
        CHECK(kt::spectral_dist(r.mat(), want) < 1e-10);
    }

    TEST_CASE("agrees with the Kubo-Ando evaluation for every vanishing builtin") {
        Rng rng(35);
        int done = 0;
        for (int rep = 0; done < 50; ++rep) {
            const std::size_t n = 2 + rng.index(3);
            const PSDMatrix a = kt::random_psd_gapped(n, rng);
            const Projection e = kt::random_projection(n, 1 + rng.index(n - 1), rng);
            for (const auto& spec : {MeanSpec::geometric(0.5), MeanSpec::harmonic(0.5),
                                     MeanSpec::logarithmic()}) {
                const Matrix lhs = mean_projection_eval(spec, a, e).mat();
                const Matrix rhs = mean_eval(spec, a, PSDMatrix::from(e.herm())).mat();
                CHECK(kt::spectral_dist(lhs, rhs) < 1e-10);
            }
            done += 3;
        }
    }

    TEST_CASE("rejects means that do not vanish at zero") {
        CHECK_THROWS_AS(mean_projection_eval(MeanSpec::arithmetic(0.5),
                                             kt::psd(kt::diag({2.0, 1.0})),
                                             kt::proj(kt::diag({1.0, 0.0}))),
                        RequiresVanishingAtZero);
    }

    TEST_CASE("rejects singular A") {
        CHECK_THROWS_AS(mean_projection_eval(MeanSpec::geometric(0.5),
                                             kt::psd(kt::diag({1.0, 0.0})),
                                             kt::proj(kt::diag({1.0, 0.0}))),
                        RequiresPositiveDefinite);
    }
}

TEST_SUITE("geometric_limit") {
    TEST_CASE("projection base gives the lattice meet at any weight") {
        Rng rng(36);
        const Projection p = kt::random_projection(4, 2, rng);
        const Projection e = kt::random_projection(4, 3, rng);
        for (double alpha : {0.25, 0.5, 0.9}) {
            const auto r = geometric_limit(PSDMatrix::from(p.herm()),
                                           PSDMatrix::from(e.herm()), alpha);
            CHECK(kt::spectral_dist(r.mat(), projection_meet(p, e).mat()) < 1e-10);
        }
    }

    TEST_CASE("positive definite base reduces to a power of A") {
        Rng rng(37);
        const PSDMatrix a = kt::random_psd_gapped(3, rng);
        const PSDMatrix b = kt::random_psd_gapped(3, rng); // positive definite
        const double alpha = 0.4;
        const auto r = geometric_limit(a, b, alpha);
        const Matrix want =
            apply_function(a.herm(), [&](double x) { return std::pow(std::max(x, 0.0), 1.0 - alpha); }).mat();
        CHECK(kt::spectral_dist(r.mat(), want) < 1e-9);
    }

    TEST_CASE("half projection against diag(4,2)") {
        const auto r = geometric_limit(kt::psd(kt::diag({4.0, 2.0})),
                                       kt::psd(half_projection()), 0.5);
        CHECK(kt::spectral_dist(r.mat(), std::sqrt(2.0) * half_projection()) < 1e-10);
    }

    TEST_CASE("weight endpoints are exact") {
        Rng rng(38);
        const PSDMatrix a = kt::random_psd_gapped(3, rng);
        const Projection e = kt::random_projection(3, 2, rng);
        const PSDMatrix b = PSDMatrix::from(e.herm());
        CHECK(kt::dist(geometric_limit(a, b, 0.0).mat(), a.mat()) == 0.0);
        CHECK(kt::spectral_dist(geometric_limit(a, b, 1.0).mat(), e.mat()) < 1e-12);
    }

    TEST_CASE("level increments are orthogonal and sum to the support meet") {
        Rng rng(39);
        for (int rep = 0; rep < 6; ++rep) {
            const PSDMatrix a = kt::random_psd_gapped(4, rng, 0.2, rep % 2);
            const Projection e = kt::random_projection(4, 3, rng);
            const SpectralDecomposition sd = group_spectrum(a);
            Matrix acc(4, 4);
            Projection prev = Projection::zero(4);
            Matrix sum(4, 4);
            std::vector<Matrix> increments;
            for (std::size_t k = 0; k < sd.values.size(); ++k) {
                acc += sd.projections[k].mat();
                const Projection meet =
                    projection_meet(Projection::from(HermitianMatrix::symmetrized(acc)), e);
                increments.push_back(meet.mat() - prev.mat());
                sum += increments.back();
                prev = meet;
            }
            for (std::size_t i = 0; i < increments.size(); ++i)
                for (std::size_t j = i + 1; j < increments.size(); ++j)
                    CHECK(spectral_norm(increments[i] * increments[j]) < 1e-9);
            const Projection support =
                Projection::from(HermitianMatrix::symmetrized(acc));
            CHECK(kt::spectral_dist(sum, projection_meet(support, e).mat()) < 1e-9);
        }
    }
}

TEST_SUITE("derived functions") {
    TEST_CASE("transpose and hat satisfy their defining identities on a grid") {
        for (const auto& spec : {MeanSpec::arithmetic(0.3), MeanSpec::geometric(0.6),
                                 MeanSpec::harmonic(0.5), MeanSpec::logarithmic()}) {
            CHECK(spec.f_tilde(1.0) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(spec.f_hat(0.0) == 0.0);
            for (int i = 0; i < 25; ++i) {
                const double x = std::pow(10.0, -4.0 + 8.0 * i / 24.0);
                CHECK(spec.f_hat(x) * x == doctest::Approx(spec.f(x)).epsilon(1e-12));
                CHECK(spec.f_tilde(x) == doctest::Approx(x * spec.f(1.0 / x)).epsilon(1e-12));
            }
        }
    }
}

TEST_SUITE("power monotonicity") {
    TEST_CASE("builtins land in their classes") {
        CHECK(classify_power_monotonicity(MeanSpec::geometric(0.3)) == PowerMonotonicity::both);
        CHECK(classify_power_monotonicity(MeanSpec::geometric(0.8)) == PowerMonotonicity::both);
        CHECK(classify_power_monotonicity(MeanSpec::harmonic(0.5)) == PowerMonotonicity::pmd);
        CHECK(classify_power_monotonicity(MeanSpec::logarithmic()) == PowerMonotonicity::pmi);
        CHECK(classify_power_monotonicity(MeanSpec::arithmetic(0.4)) == PowerMonotonicity::pmi);
    }

    TEST_CASE("decreasing in p for vanishing pmd means") {
        Rng rng(40);
        for (const auto& spec : {MeanSpec::geometric(0.3), MeanSpec::harmonic(0.5)}) {
            for (int rep = 0; rep < 4; ++rep) {
                const std::size_t n = 3;
                const PSDMatrix a = kt::psd_from_values(
                    {rng.uniform(1.1, 1.4), rng.uniform(0.9, 1.05), rng.uniform(0.6, 0.85)}, rng);
                const Projection e = kt::random_projection(n, 2, rng);
                const PSDMatrix eb = PSDMatrix::from(e.herm());
                Matrix prev;
                bool have_prev = false;
                for (double p : {1.0, 2.0, 4.0, 8.0, 16.0}) {
                    const Matrix cur = small_p_iterate(spec, a, eb, p);
                    if (have_prev) {
                        CHECK(min_eigenvalue(HermitianMatrix::symmetrized(prev - cur)) >= -1e-8);
                    }
                    prev = cur;
                    have_prev = true;
                }
            }
        }
    }
}

TEST_SUITE("f_tilde_infinity") {
    TEST_CASE("builtin closed forms") {
        CHECK(f_tilde_infinity(MeanSpec::arithmetic(0.3), 2.0).value == doctest::Approx(2.0));
        CHECK(f_tilde_infinity(MeanSpec::arithmetic(0.3), 0.5).value == doctest::Approx(1.0));
        CHECK(f_tilde_infinity(MeanSpec::geometric(0.25), 16.0).value == doctest::Approx(8.0));
        CHECK(f_tilde_infinity(MeanSpec::harmonic(0.5), 0.5).value == doctest::Approx(0.5));
        CHECK(f_tilde_infinity(MeanSpec::harmonic(0.5), 2.0).value == doctest::Approx(1.0));
        CHECK(f_tilde_infinity(MeanSpec::logarithmic(), 3.0).value == doctest::Approx(3.0));
    }

    TEST_CASE("custom spec estimates match a closed form") {
        const auto spec = MeanSpec::custom("sqrt", [](double x) { return std::sqrt(x); }, 0.0, 0.5);
        for (double x : {0.25, 0.5, 2.0, 16.0}) {
            const auto r = f_tilde_infinity(spec, x);
            CHECK(r.value == doctest::Approx(std::sqrt(x)).epsilon(1e-4));
            CHECK(r.error_bound < 1e-6);
        }
    }

    TEST_CASE("custom screening rejects non-monotone functions") {
        CHECK_THROWS_AS(MeanSpec::custom("bad", [](double x) { return 2.0 - x; }, 2.0, 0.5),
                        InputError);
        CHECK_THROWS_AS(
            MeanSpec::custom("notone", [](double x) { return 0.5 * x + 0.1; }, 0.1, 0.5),
            InputError);
    }
}

TEST_SUITE("sandwich reduction") {
    TEST_CASE("B between scaled copies of its support projection") {
        Rng rng(41);
        for (const auto& spec : {MeanSpec::geometric(0.5), MeanSpec::harmonic(0.5)}) {
            for (int rep = 0; rep < 4; ++rep) {
                const std::size_t n = 3, re = 2;
                const Projection e = kt::random_projection(n, re, rng);
                // B with support exactly ran E and eigenvalues in [0.8, 1.3].
                const Matrix basis = range_basis(PSDMatrix::from(e.herm()));
                Matrix b(n, n);
                double lam = 2.0, mu = 0.0;
                for (std::size_t k = 0; k < re; ++k) {
                    const double v = rng.uniform(0.8, 1.3);
                    lam = std::min(lam, v);
                    mu = std::max(mu, v);
                    const auto col = basis.column(k);
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = 0; j < n; ++j)
                            b(i, j) += v * col[i] * std::conj(col[j]);
                }
                // The squeeze uses joint monotonicity with the scale on both
                // arguments, so it needs lam <= 1 <= mu.
                lam = std::min(lam, 1.0);
                mu = std::max(mu, 1.0);
                const PSDMatrix bp = kt::psd(b);
                const PSDMatrix ep = PSDMatrix::from(e.herm());
                const PSDMatrix a = kt::random_psd_gapped(n, rng);
                for (double p : {2.0, 8.0}) {
                    const Matrix mid = small_p_iterate(spec, a, bp, p);
                    const Matrix lo = std::pow(lam, 1.0 / p) * small_p_iterate(spec, a, ep, p);
                    const Matrix hi = std::pow(mu, 1.0 / p) * small_p_iterate(spec, a, ep, p);
                    CHECK(min_eigenvalue(HermitianMatrix::symmetrized(mid - lo)) > -tol::psd);
                    CHECK(min_eigenvalue(HermitianMatrix::symmetrized(hi - mid)) > -tol::psd);
                }
            }
        }
    }
}
