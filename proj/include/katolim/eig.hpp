#ifndef KATOLIM_EIG_HPP
#define KATOLIM_EIG_HPP

#include <vector>

#include "katolim/hermitian.hpp"

namespace katolim {

/* Dense Hermitian eigensolver based on cyclic Jacobi rotations.

   The sweep order is fixed (row-major over the strict upper triangle), so
   identical input bits produce identical output bits. Rotations use the
   relative threshold |h_pq| <= eps * sqrt(|h_pp h_qq|), which preserves the
   high relative accuracy of Jacobi on graded positive definite matrices --
   the limits computed downstream depend on small eigenvalues being right
   to many digits, not just to eps * ||H||.

   Eigenvalues are returned in descending order with multiplicity; column k
   of `vectors` is the eigenvector of values[k]. */
struct EigResult {
    std::vector<double> values;
    Matrix vectors;
};

EigResult eig_hermitian(const HermitianMatrix& h);
// Checked entry point: throws NonHermitianInput when the symmetry defect
// exceeds tol::herm.
EigResult eig_hermitian(const Matrix& m);

// Distinct eigenvalues paired with spectral projections. `bases`
// holds an orthonormal basis of each eigenspace (n x multiplicity),
// `kernel_basis` one for the kernel.
struct SpectralDecomposition {
    std::vector<double> values;           // strictly decreasing, all > 0
    std::vector<Projection> projections;  // one per value
    Projection kernel_projection;
    std::vector<Matrix> bases;
    Matrix kernel_basis;

    std::size_t n() const { return kernel_projection.n(); }
};

// Clusters eigenvalues whose consecutive gap is <= tau_group * max(a_1, 1)
// and routes eigenvalues <= tol::zero * a_1 (or below zero) to the kernel.
SpectralDecomposition group_spectrum(const PSDMatrix& h, double tau_group = tol::group);

// Convenience for Loewner checks: extreme eigenvalues of a Hermitian matrix.
double min_eigenvalue(const HermitianMatrix& h);
double max_eigenvalue(const HermitianMatrix& h);
// Spectral norm of an arbitrary (possibly non-Hermitian) matrix.
double spectral_norm(const Matrix& m);

} // namespace katolim

#endif
