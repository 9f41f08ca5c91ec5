#ifndef KATOLIM_RENYI_HPP
#define KATOLIM_RENYI_HPP

#include <vector>

#include "katolim/linalg.hpp"

namespace katolim {

class DensityMatrix {
public:
    DensityMatrix() = default;
    static DensityMatrix from(const PSDMatrix& rho, double tau = 1e-10);

    std::size_t n() const { return rho_.n(); }
    const PSDMatrix& psd() const { return rho_; }
    const Matrix& mat() const { return rho_.mat(); }

private:
    PSDMatrix rho_;
};

// +infinity happens on support violations; keep it tagged rather than as a
// float sentinel so reports serialize unambiguously.
struct ExtendedReal {
    double value = 0.0;
    bool infinite = false;

    static ExtendedReal finite(double v) { return {v, false}; }
    static ExtendedReal infinity() { return {0.0, true}; }
};

struct RenyiPair {
    ExtendedReal d_alpha;       // (a-1)^{-1} log Tr rho^a sigma^{1-a}
    ExtendedReal d_tilde_alpha; // (a-1)^{-1} log Tr (sigma^s rho sigma^s)^a, s = (1-a)/2a
};

RenyiPair renyi_divergences(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha);

// alpha -> 0 limits. d0 = -log Tr(rho^0 sigma); the sandwiched limit comes
// from the image selection of rho^0 over sigma's descending eigenbasis:
// q0_tilde = Tr(P0 sigma) for the selected eigenprojection P0.
struct ZeroLimitReport {
    ExtendedReal d0;
    ExtendedReal d0_tilde;
    double q0_tilde = 0.0;
    Projection witness; // P0
    bool commutes = false;
    bool equality = false;
};

ZeroLimitReport zero_limits(const DensityMatrix& rho, const DensityMatrix& sigma,
                            double tau_rank = tol::rank, double tau_group = tol::group);

// Independent oracle for q0_tilde: enumeration over per-cluster rank
// vectors, feasibility decided by a Hall-type rank condition on the stacked
// images. n <= 6 only.
double q0_brute(const DensityMatrix& rho, const DensityMatrix& sigma,
                Execution exec = Execution::serial, double tau_rank = tol::rank,
                double tau_group = tol::group);

// Tr (rho^0 sigma^p rho^0)^{1/p} along an increasing grid; nondecreasing,
// with the tail approaching q0_tilde.
std::vector<double> alt_trace_monotone(const Projection& rho0, const DensityMatrix& sigma,
                                       const std::vector<double>& p_grid);

} // namespace katolim

#endif
