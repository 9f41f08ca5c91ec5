#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "katolim/errors.hpp"
#include "katolim/maps.hpp"

using namespace katolim;
using kt::Rng;

namespace {

// The non-unital 2x2 example map: X -> x11 P1 + x22 Q1 with P1 = |e1><e1|
// and Q1 the projection onto (1,1)/sqrt(2).
PositiveMapSpec corner_map() {
    Matrix k1(2, 2), k2(2, 2);
    k1(0, 0) = 1.0;                       // sqrt(P1) e1 row
    const double s = 1.0 / std::sqrt(2.0);
    k2(0, 1) = s;
    k2(1, 1) = s;                         // maps e2-component onto (1,1)/sqrt 2
    return PositiveMapSpec::kraus({k1, k2});
}

} // namespace

TEST_SUITE("apply_map") {
    TEST_CASE("block average of a block-diagonal matrix") {
        Rng rng(1);
        const Matrix a = kt::random_hermitian(3, rng).mat();
        const Matrix b = kt::random_hermitian(3, rng).mat();
        const auto phi = PositiveMapSpec::block_average(3);
        const Matrix out = phi.apply(Matrix::direct_sum(a, b));
        CHECK(kt::dist(out, 0.5 * (a + b)) < 1e-15);
    }

    TEST_CASE("identity congruence") {
        Rng rng(2);
        const HermitianMatrix x = kt::random_hermitian(4, rng);
        const auto phi = PositiveMapSpec::congruence(Matrix::identity(4));
        CHECK(kt::dist(phi.apply(x).mat(), x.mat()) < 1e-15);
    }

    TEST_CASE("corner map on diag(2,1)") {
        const Matrix out = corner_map().apply(kt::diag({2.0, 1.0}));
        Matrix want(2, 2);
        want(0, 0) = 2.5;
        want(0, 1) = want(1, 0) = 0.5;
        want(1, 1) = 0.5;
        CHECK(kt::dist(out, want) < 1e-15);
    }

    TEST_CASE("trace against a state") {
        Matrix rho(2, 2);
        rho(0, 0) = rho(0, 1) = rho(1, 0) = rho(1, 1) = 0.5;
        const auto phi = PositiveMapSpec::trace_state(kt::psd(rho));
        const Matrix out = phi.apply(kt::diag({1.0, 0.0}));
        REQUIRE(out.rows() == 1);
        CHECK(std::abs(out(0, 0) - cplx{0.5, 0.0}) < 1e-15);
    }

    TEST_CASE("dimension mismatch") {
        const auto phi = PositiveMapSpec::block_average(2);
        CHECK_THROWS_AS(phi.apply(Matrix::identity(3)), DimensionMismatch);
    }
}

TEST_SUITE("is_unital") {
    TEST_CASE("block average is unital") {
        CHECK(PositiveMapSpec::block_average(3).is_unital().unital);
    }

    TEST_CASE("states are unital") {
        Rng rng(3);
        const auto phi = PositiveMapSpec::trace_state(kt::random_density(3, rng));
        CHECK(phi.is_unital().unital);
    }

    TEST_CASE("corner map is not, with the right witness") {
        const auto u = corner_map().is_unital();
        CHECK_FALSE(u.unital);
        Matrix want(2, 2);
        want(0, 0) = 1.5;
        want(0, 1) = want(1, 0) = 0.5;
        want(1, 1) = 0.5;
        CHECK(kt::dist(u.witness.mat(), want) < 1e-12);
    }
}

TEST_SUITE("support_compress") {
    TEST_CASE("strictly positive maps come back unchanged") {
        Rng rng(4);
        const auto phi = PositiveMapSpec::congruence(kt::random_unitary(3, rng));
        const auto c = phi.support_compress();
        CHECK(c.out_dim() == 3);
        CHECK(c.kind() == PositiveMapSpec::Kind::congruence);
    }

    TEST_CASE("rank-one congruence compresses to dimension 1") {
        Matrix k(2, 2);
        k(0, 0) = 1.0;
        k(0, 1) = 2.0; // rank-1, range = span{e1}
        const auto c = PositiveMapSpec::congruence(k).support_compress();
        CHECK(c.out_dim() == 1);
    }

    TEST_CASE("zero map is rejected") {
        CHECK_THROWS_AS(PositiveMapSpec::kraus({Matrix::zero(2, 2)}).support_compress(), ZeroMap);
    }

    TEST_CASE("compression preserves the map on the support") {
        Matrix k(3, 2);
        k(0, 0) = 1.0;
        k(1, 1) = 1.0; // range misses e3
        const auto phi = PositiveMapSpec::congruence(k);
        const auto c = phi.support_compress();
        CHECK(c.out_dim() == 2);
        Rng rng(5);
        const HermitianMatrix x = kt::random_hermitian(2, rng);
        // Traces agree (compression is by an isometry onto the range).
        CHECK(phi.apply(x).mat().trace_real() ==
              doctest::Approx(c.apply(x).mat().trace_real()).epsilon(1e-12));
    }
}

TEST_SUITE("map properties") {
    TEST_CASE("positivity on random PSD inputs") {
        Rng rng(6);
        std::vector<PositiveMapSpec> maps;
        maps.push_back(PositiveMapSpec::block_average(2));
        maps.push_back(PositiveMapSpec::congruence(kt::random_matrix(3, 4, rng)));
        maps.push_back(PositiveMapSpec::kraus(
            {kt::random_matrix(2, 3, rng), kt::random_matrix(2, 3, rng)}));
        maps.push_back(PositiveMapSpec::trace_state(kt::random_density(3, rng)));
        for (const auto& phi : maps) {
            for (int rep = 0; rep < 25; ++rep) {
                const Matrix g = kt::random_matrix(phi.in_dim(), phi.in_dim(), rng);
                const HermitianMatrix x = HermitianMatrix::symmetrized(g * g.adjoint());
                const HermitianMatrix y = phi.apply(x);
                const double lo = min_eigenvalue(y);
                CHECK(lo >= -1e-10 * std::max(1.0, spectral_norm(y.mat())));
            }
        }
    }

    TEST_CASE("linearity") {
        Rng rng(7);
        const auto phi = PositiveMapSpec::kraus(
            {kt::random_matrix(3, 3, rng), kt::random_matrix(3, 3, rng)});
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix x = kt::random_hermitian(3, rng).mat();
            const Matrix y = kt::random_hermitian(3, rng).mat();
            const double lam = rng.uniform(-2.0, 2.0);
            const Matrix lhs = phi.apply(x + lam * y);
            const Matrix rhs = phi.apply(x) + lam * phi.apply(y);
            const double scale = std::max(1.0, lhs.max_abs());
            CHECK(kt::dist(lhs, rhs) <= 1e-11 * scale);
        }
    }

    TEST_CASE("block average commutes with powers on direct sums") {
        Rng rng(8);
        const PSDMatrix a = kt::random_psd_gapped(3, rng);
        const PSDMatrix b = kt::random_psd_gapped(3, rng);
        const auto phi = PositiveMapSpec::block_average(3);
        for (double p : {2.0, 5.0}) {
            const PSDMatrix ab = PSDMatrix::from(
                HermitianMatrix::symmetrized(Matrix::direct_sum(a.mat(), b.mat())));
            const Matrix lhs = phi.apply(matrix_power(ab, p).mat());
            const Matrix rhs = 0.5 * (matrix_power(a, p).mat() + matrix_power(b, p).mat());
            CHECK(kt::dist(lhs, rhs) <= 1e-11 * std::max(1.0, rhs.max_abs()));
        }
    }

    TEST_CASE("kraus conversion reproduces every kind") {
        Rng rng(9);
        std::vector<PositiveMapSpec> maps;
        maps.push_back(PositiveMapSpec::block_average(2));
        maps.push_back(PositiveMapSpec::trace_state(kt::random_density(3, rng)));
        maps.push_back(PositiveMapSpec::congruence(kt::random_matrix(2, 3, rng)));
        for (const auto& phi : maps) {
            const auto ks = phi.to_kraus();
            const HermitianMatrix x = kt::random_hermitian(phi.in_dim(), rng);
            Matrix sum(phi.out_dim(), phi.out_dim());
            for (const auto& k : ks) sum += k * x.mat() * k.adjoint();
            CHECK(kt::dist(sum, phi.apply(x).mat()) < 1e-12);
        }
    }

    TEST_CASE("invalid specs are rejected") {
        CHECK_THROWS_AS(PositiveMapSpec::kraus({}), InputError);
        Matrix not_density(2, 2);
        not_density(0, 0) = 2.0;
        CHECK_THROWS_AS(PositiveMapSpec::trace_state(kt::psd(not_density)), InputError);
    }
}
