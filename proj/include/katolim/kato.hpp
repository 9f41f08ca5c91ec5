#ifndef KATOLIM_KATO_HPP
#define KATOLIM_KATO_HPP

#include <vector>

#include "katolim/linalg.hpp"
#include "katolim/maps.hpp"

namespace katolim {

/* Closed forms of lim_{p->inf} (K A^p K*)^{1/p} and Phi(A^p)^{1/p}.

   The congruence limit diagonalizes A in descending order, pushes the
   eigenbasis through K and keeps the images that enlarge the span, with
   eigenvalue clusters processed as blocks so the result does not depend on
   the basis chosen inside a degenerate eigenspace. The map limit works on
   ranges of Phi over the cumulative spectral projections, which is the
   basis-free formulation of the same selection. */

struct CongruenceLimitResult {
    PSDMatrix limit;                       // sum_k a_{l_k} |u_k><u_k|
    std::vector<std::size_t> indices;      // selected positions (0-based) in descending order
    std::vector<double> values;            // a_{l_k}
    Matrix frame;                          // n' x m orthonormal columns u_k
    std::vector<double> predicted_spectrum; // length n': values then exact zeros
};

CongruenceLimitResult congruence_limit(const Matrix& k, const PSDMatrix& a,
                                       double tau_rank = tol::rank,
                                       double tau_group = tol::group);

struct PredictedSpectrum {
    std::vector<double> values; // length = output dimension
    bool independent;           // all images of the positive part kept
};

PredictedSpectrum predicted_eigenvalues(const Matrix& k, const PSDMatrix& a,
                                        double tau_rank = tol::rank,
                                        double tau_group = tol::group);

struct MapLimitResult {
    PSDMatrix limit;
    std::vector<double> values;           // descending positive cluster values
    std::vector<Projection> projections;  // P_k per value, possibly rank 0
};

// lim Phi(A^p)^{1/p}: ranges of Phi over increasing spectral filtrations.
MapLimitResult map_limit(const PositiveMapSpec& phi, const PSDMatrix& a,
                         double tau_rank = tol::rank, double tau_group = tol::group);

// lim Phi(A^{-p})^{-1/p} with powers in the generalized-inverse sense:
// the same construction run from the bottom of the spectrum.
MapLimitResult neg_map_limit(const PositiveMapSpec& phi, const PSDMatrix& a,
                             double tau_rank = tol::rank, double tau_group = tol::group);

// The epsilon-regularized alternative lim_{eps->0} Phi((A+eps I)^{-p})^{-1/p}
// at fixed p, evaluated along a decreasing schedule. Iterates must decrease
// in the Loewner order (within tol::psd); the run stops early once
// consecutive iterates agree to cauchy_tol.
struct EpsilonNegLimit {
    HermitianMatrix value;
    double cauchy_delta = 0.0;
    std::vector<double> epsilons;
};

EpsilonNegLimit epsilon_neg_limit(const PositiveMapSpec& phi, const PSDMatrix& a, double p,
                                  int schedule_steps = 12, double cauchy_tol = 1e-9);

// Supremum / infimum in the spectral order. The supremum is the
// block-average map limit of A (+) B; the infimum is the meet-dual of the
// same level-projection construction, cross-checked in the tests against
// the harmonic-mean sweep.
PSDMatrix spectral_sup(const PSDMatrix& a, const PSDMatrix& b,
                       double tau_rank = tol::rank, double tau_group = tol::group);
PSDMatrix spectral_inf(const PSDMatrix& a, const PSDMatrix& b,
                       double tau_rank = tol::rank, double tau_group = tol::group);

} // namespace katolim

#endif
