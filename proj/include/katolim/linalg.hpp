#ifndef KATOLIM_LINALG_HPP
#define KATOLIM_LINALG_HPP

#include <functional>
#include <vector>

#include "katolim/eig.hpp"
#include "katolim/hermitian.hpp"

namespace katolim {

// Execution policy for the data-parallel kernels. Parallel paths produce
// bit-identical results to the serial reference (independent writes,
// order-free reductions); the serial path is kept for testing and as the
// baseline in the benchmark tool.
enum class Execution { serial, parallel };

// Projection onto the span of eigenvectors with eigenvalue
// > tau_rank * max(lambda_max, scale_floor). The zero matrix maps to the
// zero projection. Callers that know the input's natural scale (lattice
// operations on projections, ranges under a fixed map) pass it as
// scale_floor so that a numerically-zero input cannot promote roundoff
// into range directions.
Projection range_projection(const PSDMatrix& m, double tau_rank = tol::rank,
                            double scale_floor = 0.0);

// Orthonormal basis of the range as matrix columns (n x rank).
Matrix range_basis(const PSDMatrix& m, double tau_rank = tol::rank,
                   double scale_floor = 0.0);

// Ordered Gram-Schmidt with selection: index k is kept iff vector k has
// residual norm > max(tau_rank * max_input_norm, tol::abs_floor) after
// projecting out the span of previously kept vectors. All-zero input
// selects nothing (m == 0). The first kept vector is normalized as-is.
struct GramSchmidtSelection {
    std::vector<std::size_t> indices; // 0-based, strictly increasing
    std::vector<std::vector<cplx>> basis;
};

GramSchmidtSelection gram_schmidt_select(const std::vector<std::vector<cplx>>& vectors,
                                         double tau_rank = tol::rank);

// Number of linearly independent columns at the same threshold rule.
std::size_t numeric_rank(const Matrix& columns, double tau_rank = tol::rank);

// A^p with the common scale split off: A^p = 2^{log2_scale} * matrix, and
// the eigenvalues of `matrix` lie in [0, 1]. Negative p acts on the support
// only (generalized inverse); the kernel stays the kernel. p up to 2^14 is
// safe because only the scaled matrix is ever materialized.
struct ScaledPSD {
    PSDMatrix matrix;
    double log2_scale = 0.0;
};

ScaledPSD matrix_power_scaled(const PSDMatrix& a, double p);

// Rescaled convenience form; throws Overflow when 2^{log2_scale} does not
// fit in a double.
PSDMatrix matrix_power(const PSDMatrix& a, double p);

// V f(Lambda) V*. `domain` gates eigenvalues; violations throw DomainError.
HermitianMatrix apply_function(const HermitianMatrix& h,
                               const std::function<double(double)>& f,
                               const std::function<bool(double)>& domain = nullptr);

// k-th compound (antisymmetric tensor power): entry (I, J) over
// lexicographically ordered k-subsets is det M[I, J].
Matrix compound(const Matrix& m, std::size_t k, Execution exec = Execution::serial);

// Lattice operations on ranges. Join is the range of the sum; meet uses the
// complement identity ran(P ^ E) = ran E - ran(E P_perp E), re-idempotized.
Projection projection_join(const Projection& p, const Projection& e,
                           double tau_rank = tol::rank);
Projection projection_meet(const Projection& p, const Projection& e,
                           double tau_rank = tol::rank);

} // namespace katolim

#endif
