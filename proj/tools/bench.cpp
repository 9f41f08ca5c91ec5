// Benchmark: OpenMP kernels against their serial reference.
// Covers the three data-parallel surfaces: sweep grids, the compound
// matrix, and the zero-limit enumeration.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "katolim/kato.hpp"
#include "katolim/renyi.hpp"
#include "katolim/sweep.hpp"

using namespace katolim;

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }
    cplx cgauss() {
        const double u = std::max(u01(), 1e-300);
        const double v = u01();
        const double r = std::sqrt(-2.0 * std::log(u));
        return {r * std::cos(6.283185307179586 * v), r * std::sin(6.283185307179586 * v)};
    }

private:
    std::mt19937_64 gen_;
};

Matrix random_matrix(std::size_t n, std::size_t m, Rng& rng) {
    Matrix out(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) out(i, j) = rng.cgauss();
    return out;
}

PSDMatrix random_psd(std::size_t n, Rng& rng) {
    const Matrix g = random_matrix(n, n, rng);
    return PSDMatrix::from(HermitianMatrix::symmetrized(g * g.adjoint()));
}

template <typename F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s %10.1f ms %10.1f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "DIFFER");
}

} // namespace

int main() {
    Rng rng(2024);
    std::printf("%-28s %13s %13s %9s   %s\n", "kernel", "serial", "parallel", "speedup",
                "results");

    {
        const std::size_t n = 10;
        const PSDMatrix a = random_psd(n, rng);
        const Matrix k = random_matrix(n, n, rng);
        const auto phi = PositiveMapSpec::congruence(k);
        std::vector<double> grid;
        for (double p = 1.0; p <= 8192.0; p *= std::sqrt(2.0)) grid.push_back(p);
        ConvergenceReport rs, rp;
        const double ts = time_ms([&] { rs = sweep_map(phi, a, grid, {}, Execution::serial); });
        const double tp = time_ms([&] { rp = sweep_map(phi, a, grid, {}, Execution::parallel); });
        bool same = true;
        for (std::size_t i = 0; i < grid.size(); ++i)
            same = same && (rs.iterates[i].mat() - rp.iterates[i].mat()).max_abs() == 0.0;
        row("sweep grid (n=10, 27 pts)", ts, tp, same);
    }
    {
        const std::size_t n = 12;
        const Matrix m = random_matrix(n, n, rng);
        Matrix cs, cp;
        const double ts = time_ms([&] { cs = compound(m, 6, Execution::serial); });
        const double tp = time_ms([&] { cp = compound(m, 6, Execution::parallel); });
        row("compound (12 choose 6)", ts, tp, (cs - cp).max_abs() == 0.0);
    }
    {
        const std::size_t n = 6;
        Matrix g = random_matrix(n, n, rng);
        Matrix rho_m = g * g.adjoint();
        rho_m *= cplx{1.0 / rho_m.trace_real(), 0.0};
        const DensityMatrix rho = DensityMatrix::from(PSDMatrix::from(
            HermitianMatrix::symmetrized(rho_m)));
        const DensityMatrix sigma = DensityMatrix::from([&] {
            Matrix h = random_matrix(n, n, rng);
            Matrix s = h * h.adjoint();
            s *= cplx{1.0 / s.trace_real(), 0.0};
            return PSDMatrix::from(HermitianMatrix::symmetrized(s));
        }());
        double qs = 0.0, qp = 0.0;
        double ts = 0.0, tp = 0.0;
        // The enumeration itself is quick at n = 6; repeat for a stable timing.
        ts = time_ms([&] {
            for (int i = 0; i < 200; ++i) qs = q0_brute(rho, sigma, Execution::serial);
        });
        tp = time_ms([&] {
            for (int i = 0; i < 200; ++i) qp = q0_brute(rho, sigma, Execution::parallel);
        });
        row("zero-limit enumeration x200", ts, tp, qs == qp);
    }
    return 0;
}
