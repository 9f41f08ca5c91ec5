#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "katolim/errors.hpp"
#include "katolim/renyi.hpp"

using namespace katolim;
using kt::Rng;

namespace {

DensityMatrix density(const Matrix& m) { return DensityMatrix::from(kt::psd(m)); }

DensityMatrix random_density_fixture(std::size_t n, Rng& rng, bool commuting_with_diag) {
    if (commuting_with_diag) {
        std::vector<double> d(n);
        double sum = 0.0;
        for (auto& x : d) {
            x = rng.uniform(0.1, 1.0);
            sum += x;
        }
        for (auto& x : d) x /= sum;
        return density(kt::diag(d));
    }
    return DensityMatrix::from(kt::random_density(n, rng));
}

// The noncommuting pair used throughout: rho supported on (1,1)/sqrt(2),
// sigma = diag(3/4, 1/4).
DensityMatrix rho_half() {
    Matrix m(2, 2);
    m(0, 0) = m(0, 1) = m(1, 0) = m(1, 1) = 0.5;
    return density(m);
}
DensityMatrix sigma_34() { return density(kt::diag({0.75, 0.25})); }

} // namespace

TEST_SUITE("renyi_divergences") {
    TEST_CASE("identical states have zero divergence") {
        Rng rng(51);
        const DensityMatrix rho = random_density_fixture(3, rng, false);
        for (double alpha : {0.5, 2.0}) {
            const auto r = renyi_divergences(rho, rho, alpha);
            CHECK_FALSE(r.d_alpha.infinite);
            CHECK(std::abs(r.d_alpha.value) < 1e-10);
            CHECK(std::abs(r.d_tilde_alpha.value) < 1e-10);
        }
    }

    TEST_CASE("commuting pair matches the scalar formula") {
        const auto r = renyi_divergences(density(kt::diag({0.5, 0.5})), sigma_34(), 2.0);
        const double want = std::log(0.25 / 0.75 + 0.25 / 0.25);
        CHECK(r.d_alpha.value == doctest::Approx(want).epsilon(1e-12));
        CHECK(r.d_tilde_alpha.value == doctest::Approx(want).epsilon(1e-12));
        CHECK(want == doctest::Approx(std::log(4.0 / 3.0)));
    }

    TEST_CASE("support violation above alpha = 1 is infinite") {
        const auto r = renyi_divergences(density(kt::diag({1.0, 0.0})),
                                         density(kt::diag({0.0, 1.0})), 2.0);
        CHECK(r.d_alpha.infinite);
        CHECK(r.d_tilde_alpha.infinite);
    }

    TEST_CASE("bad alpha rejected") {
        Rng rng(52);
        const DensityMatrix rho = random_density_fixture(2, rng, false);
        CHECK_THROWS_AS(renyi_divergences(rho, rho, 1.0), BadAlpha);
        CHECK_THROWS_AS(renyi_divergences(rho, rho, -0.5), BadAlpha);
    }
}

TEST_SUITE("zero_limits") {
    TEST_CASE("full-rank rho gives zero limits") {
        Rng rng(53);
        const DensityMatrix rho = DensityMatrix::from(kt::random_density(3, rng));
        const DensityMatrix sigma = DensityMatrix::from(kt::random_density(3, rng));
        const auto z = zero_limits(rho, sigma);
        CHECK(z.q0_tilde == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(z.d0.value) < 1e-10);
        CHECK(std::abs(z.d0_tilde.value) < 1e-10);
        CHECK(z.commutes);
        CHECK(z.equality);
    }

    TEST_CASE("commuting rank-one support picks the top weight") {
        Matrix rho(2, 2);
        rho(0, 0) = 1.0;
        const auto z = zero_limits(density(rho), sigma_34());
        CHECK(z.q0_tilde == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(z.d0.value == doctest::Approx(-std::log(0.75)).epsilon(1e-12));
        CHECK(z.d0_tilde.value == doctest::Approx(-std::log(0.75)).epsilon(1e-12));
        CHECK(z.commutes);
        CHECK(z.equality);
    }

    TEST_CASE("noncommuting support splits the two limits") {
        const auto z = zero_limits(rho_half(), sigma_34());
        CHECK(z.d0.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
        CHECK(z.q0_tilde == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(z.d0_tilde.value == doctest::Approx(-std::log(0.75)).epsilon(1e-12));
        CHECK(z.d0_tilde.value < z.d0.value);
        CHECK_FALSE(z.commutes);
        CHECK_FALSE(z.equality);
        // The witness is an eigenprojection of sigma with full compression rank.
        CHECK(z.witness.rank() == 1);
        CHECK(kt::dist(z.witness.mat(), kt::diag({1.0, 0.0})) < 1e-12);
    }
}

TEST_SUITE("q0_brute") {
    TEST_CASE("full rank gives one") {
        Rng rng(54);
        const DensityMatrix rho = DensityMatrix::from(kt::random_density(3, rng));
        const DensityMatrix sigma = DensityMatrix::from(kt::random_density(3, rng));
        CHECK(q0_brute(rho, sigma) == doctest::Approx(1.0).epsilon(1e-10));
    }

    TEST_CASE("noncommuting fixture maximizes at the top eigenvalue") {
        CHECK(q0_brute(rho_half(), sigma_34()) == doctest::Approx(0.75).epsilon(1e-12));
    }

    TEST_CASE("kernel directions of sigma are excluded") {
        // sigma rank-deficient, rho supported inside sigma's support.
        Matrix rho(3, 3);
        rho(0, 0) = 1.0;
        const auto z = q0_brute(density(rho), density(kt::diag({0.6, 0.4, 0.0})));
        CHECK(z == doctest::Approx(0.6).epsilon(1e-12));
    }

    TEST_CASE("too large dimension is rejected") {
        Rng rng(55);
        const DensityMatrix rho = DensityMatrix::from(kt::random_density(7, rng));
        CHECK_THROWS_AS(q0_brute(rho, rho), TooLarge);
    }

    TEST_CASE("agrees with the selection construction on random pairs") {
        Rng rng(56);
        int done = 0;
        while (done < 50) {
            const std::size_t n = 2 + rng.index(3);
            // Mix singular and full-rank rho, commuting and not.
            DensityMatrix rho = [&] {
                if (rng.u01() < 0.5) {
                    const Projection p = kt::random_projection(n, 1 + rng.index(n), rng);
                    Matrix m = p.mat();
                    m *= cplx{1.0 / p.mat().trace_real(), 0.0};
                    return density(m);
                }
                return DensityMatrix::from(kt::random_density(n, rng));
            }();
            const DensityMatrix sigma = random_density_fixture(n, rng, rng.u01() < 0.4);
            const auto z = zero_limits(rho, sigma);
            const double brute = q0_brute(rho, sigma);
            CHECK(z.q0_tilde == doctest::Approx(brute).epsilon(1e-9));
            ++done;
        }
    }

    TEST_CASE("degenerate sigma clusters are handled through ranks") {
        // sigma = I/3: every projection commutes; the constraint is the
        // compression rank against a rank-2 rho.
        Rng rng(57);
        const Projection p = kt::random_projection(3, 2, rng);
        Matrix m = p.mat();
        m *= cplx{0.5, 0.0};
        const DensityMatrix rho = density(m);
        const DensityMatrix sigma = density(kt::diag({1.0 / 3, 1.0 / 3, 1.0 / 3}));
        CHECK(q0_brute(rho, sigma) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
        CHECK(zero_limits(rho, sigma).q0_tilde == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    }

    TEST_CASE("parallel enumeration matches the serial reference") {
        Rng rng(58);
        for (int rep = 0; rep < 5; ++rep) {
            const DensityMatrix rho = DensityMatrix::from(kt::random_density(4, rng));
            const DensityMatrix sigma = random_density_fixture(4, rng, rep % 2 == 0);
            CHECK(q0_brute(rho, sigma, Execution::serial) ==
                  q0_brute(rho, sigma, Execution::parallel));
        }
    }
}

TEST_SUITE("alt_trace_monotone") {
    TEST_CASE("commuting pair is constant") {
        Matrix rho(2, 2);
        rho(0, 0) = 1.0;
        const auto vals = alt_trace_monotone(kt::proj(rho), sigma_34(), {1.0, 2.0, 4.0, 8.0});
        for (double v : vals) CHECK(v == doctest::Approx(0.75).epsilon(1e-10));
    }

    TEST_CASE("noncommuting pair increases toward the selection value") {
        const Projection rho0 = kt::proj(rho_half().mat()); // the half matrix is its own support
        const auto vals = alt_trace_monotone(rho0, sigma_34(),
                                             {1.0, 2.0, 4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0});
        for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] >= vals[i - 1] - 1e-9);
        CHECK(vals.front() == doctest::Approx(0.5).epsilon(1e-10)); // Tr(rho0 sigma)
        CHECK(vals.back() == doctest::Approx(0.75).epsilon(1e-3));
        CHECK(vals[1] > vals[0] + 1e-3); // strictly increasing away from commutation
    }

    TEST_CASE("nondecreasing on random pairs with the tail near q0_tilde") {
        Rng rng(59);
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t n = 3;
            const Projection rho0 = kt::random_projection(n, 1 + rng.index(n), rng);
            std::vector<double> d(n);
            double sum = 0;
            for (auto& x : d) {
                x = rng.uniform(0.1, 1.0);
                sum += x;
            }
            for (auto& x : d) x /= sum;
            const DensityMatrix sigma = density(kt::diag(d));
            const auto vals = alt_trace_monotone(rho0, sigma,
                                                 {1.0, 2.0, 4.0, 16.0, 64.0, 512.0, 4096.0});
            for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] >= vals[i - 1] - 1e-9);
            Matrix r = rho0.mat();
            r *= cplx{1.0 / std::max(1.0, r.trace_real()), 0.0};
            // Compare the tail against the independent enumeration.
            const double q = q0_brute(density(r), sigma);
            CHECK(vals.back() == doctest::Approx(q).epsilon(1e-3));
        }
    }

    TEST_CASE("grid preconditions") {
        const Projection p = kt::proj(kt::diag({1.0, 0.0}));
        CHECK_THROWS_AS(alt_trace_monotone(p, sigma_34(), {2.0}), BadGrid);
        CHECK_THROWS_AS(alt_trace_monotone(p, sigma_34(), {2.0, 1.0}), BadGrid);
    }
}

TEST_SUITE("zero-limit order") {
    TEST_CASE("sandwiched limit never exceeds the traditional one") {
        Rng rng(60);
        for (int rep = 0; rep < 100; ++rep) {
            const std::size_t n = 2 + rng.index(3);
            DensityMatrix rho = [&]() {
                if (rng.u01() < 0.6) {
                    const Projection p = kt::random_projection(n, 1 + rng.index(n), rng);
                    Matrix m = p.mat();
                    m *= cplx{1.0 / p.mat().trace_real(), 0.0};
                    return density(m);
                }
                return DensityMatrix::from(kt::random_density(n, rng));
            }();
            const DensityMatrix sigma = random_density_fixture(n, rng, rng.u01() < 0.3);
            const auto z = zero_limits(rho, sigma);
            if (!z.d0.infinite && !z.d0_tilde.infinite) {
                CHECK(z.d0_tilde.value <= z.d0.value + 1e-9);
            } else {
                CHECK(z.d0.infinite == z.d0_tilde.infinite);
            }
        }
    }

    TEST_CASE("equality exactly on commuting fixtures") {
        Rng rng(61);
        int kept = 0;
        while (kept < 30) {
            const std::size_t n = 2 + rng.index(3);
            const bool make_commuting = kept % 2 == 0;
            DensityMatrix rho = [&]() {
                if (make_commuting) {
                    std::vector<double> d(n, 0.0);
                    const std::size_t r = 1 + rng.index(n);
                    for (std::size_t i = 0; i < r; ++i) d[i] = 1.0 / static_cast<double>(r);
                    return density(kt::diag(d));
                }
                const Projection p = kt::random_projection(n, 1 + rng.index(n - 1), rng);
                Matrix m = p.mat();
                m *= cplx{1.0 / p.mat().trace_real(), 0.0};
                return density(m);
            }();
            std::vector<double> d(n);
            double sum = 0;
            for (auto& x : d) {
                x = rng.uniform(0.2, 1.0);
                sum += x;
            }
            for (auto& x : d) x /= sum;
            const DensityMatrix sigma = density(kt::diag(d));

            // Skip near-threshold fixtures: the criterion is two-sided only
            // away from the tolerance boundary.
            const Matrix rho0 = range_projection(rho.psd()).mat();
            const double comm = spectral_norm(rho0 * sigma.mat() - sigma.mat() * rho0);
            if (comm >= 1e-12 && comm <= 1e-3) continue;
            const auto z = zero_limits(rho, sigma);
            CHECK(z.commutes == (comm < 1e-12));
            CHECK(z.equality == z.commutes);
            ++kept;
        }
    }
}
