#ifndef KATOLIM_TEST_HELPERS_HPP
#define KATOLIM_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "katolim/eig.hpp"
#include "katolim/hermitian.hpp"
#include "katolim/linalg.hpp"

namespace kt {

using katolim::cplx;
using katolim::Matrix;

// Fixture RNG: raw-bit uniforms so fixtures reproduce across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double u01() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    double gauss() {
        // Box-Muller; consumes two uniforms.
        const double u = std::max(u01(), 1e-300);
        const double v = u01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }
    cplx cgauss() { return cplx{gauss(), gauss()}; }

private:
    std::mt19937_64 gen_;
};

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.cgauss();
    return m;
}

inline Matrix random_unitary(std::size_t n, Rng& rng) {
    // Gram-Schmidt on a Gaussian matrix.
    Matrix g = random_matrix(n, n, rng);
    for (std::size_t j = 0; j < n; ++j) {
        auto col = g.column(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                const auto prev = g.column(k);
                const cplx c = katolim::inner(prev, col);
                for (std::size_t i = 0; i < n; ++i) col[i] -= c * prev[i];
            }
        }
        const double nn = katolim::dot_abs(col);
        for (auto& x : col) x /= nn;
        g.set_column(j, col);
    }
    return g;
}

inline katolim::HermitianMatrix random_hermitian(std::size_t n, Rng& rng) {
    const Matrix g = random_matrix(n, n, rng);
    return katolim::HermitianMatrix::symmetrized(g);
}

// Eigenvalues descending with consecutive relative gaps >= min_gap
// ((a_k - a_{k+1}) / a_k >= min_gap), top value in [1, 3].
inline std::vector<double> gapped_values(std::size_t n, kt::Rng& rng, double min_gap = 0.2,
                                         std::size_t zeros = 0) {
    std::vector<double> v;
    double cur = rng.uniform(1.0, 3.0);
    for (std::size_t i = 0; i + zeros < n; ++i) {
        v.push_back(cur);
        cur *= rng.uniform(0.4, 1.0 - min_gap);
    }
    for (std::size_t i = 0; i < zeros; ++i) v.push_back(0.0);
    return v;
}

inline katolim::PSDMatrix psd_from_values(const std::vector<double>& values, Rng& rng) {
    const std::size_t n = values.size();
    const Matrix u = random_unitary(n, rng);
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) += values[k] * u(i, k) * std::conj(u(j, k));
    return katolim::PSDMatrix::from(katolim::HermitianMatrix::symmetrized(m));
}

inline katolim::PSDMatrix random_psd_gapped(std::size_t n, Rng& rng, double min_gap = 0.2,
                                            std::size_t zeros = 0) {
    return psd_from_values(gapped_values(n, rng, min_gap, zeros), rng);
}

inline katolim::Projection random_projection(std::size_t n, std::size_t rank, Rng& rng) {
    const Matrix u = random_unitary(n, rng);
    Matrix m(n, n);
    for (std::size_t k = 0; k < rank; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) += u(i, k) * std::conj(u(j, k));
    return katolim::Projection::from(katolim::HermitianMatrix::symmetrized(m));
}

inline katolim::PSDMatrix random_density(std::size_t n, Rng& rng) {
    const Matrix g = random_matrix(n, n, rng);
    Matrix m = g * g.adjoint();
    const double tr = m.trace_real();
    m *= cplx{1.0 / tr, 0.0};
    return katolim::PSDMatrix::from(katolim::HermitianMatrix::symmetrized(m));
}

inline Matrix diag(const std::vector<double>& d) { return Matrix::diagonal(d); }

inline katolim::PSDMatrix psd(const Matrix& m) {
    return katolim::PSDMatrix::from(katolim::HermitianMatrix::from(m));
}

inline katolim::Projection proj(const Matrix& m) {
    return katolim::Projection::from(katolim::HermitianMatrix::from(m));
}

inline double dist(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

inline double spectral_dist(const Matrix& a, const Matrix& b) {
    return katolim::spectral_norm(a - b);
}

} // namespace kt

#endif
