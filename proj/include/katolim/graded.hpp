#ifndef KATOLIM_GRADED_HPP
#define KATOLIM_GRADED_HPP

#include <optional>
#include <vector>

#include "katolim/matrix.hpp"
#include "katolim/xfloat.hpp"

namespace katolim {

/* One-sided Jacobi SVD on explicitly column-scaled factors.

   Every p-sweep target here factors as G G* with G a matrix whose columns
   are O(1) vectors scaled by 2^{(p/2) log2 a_j}. At p = 2^12 those scales
   span ranges no double matrix can hold, and forming G G* would bury the
   small singular values under the rounding of the large ones. Working
   one-sidedly on the columns, in extended-exponent arithmetic, keeps every
   singular value accurate relative to its own scale, which is what the
   (1/p)-th root at the end needs.

   A column may be tagged `infinite`: it stands for a direction whose scale
   grows without bound in an epsilon-limit (the kernel of A under inverse
   powers). Those columns participate in the orthogonalization -- they short
   out the finite columns exactly as the limit does -- and are reported
   separately so the caller can map them to the limit value (0 under any
   function vanishing at infinity).

   `rank` truncates: only the `rank` largest singular values are genuine
   (the rest are roundoff from dependent columns) and the caller supplies it
   from the unscaled column set, where it is an ordinary rank decision. */

struct GradedColumn {
    std::vector<cplx> content;   // O(1) entries
    double log2_scale = 0.0;     // column = content * 2^{log2_scale}
    bool infinite = false;
};

struct GradedSvd {
    // Kept singular values, descending; log2 scale. Entries tagged
    // infinite came from infinite-tier columns.
    std::vector<double> log2_sigma;
    std::vector<bool> infinite;
    // Left singular vectors for the kept values (rows x kept), orthonormal.
    Matrix vectors;
    // Accumulated plane rotations R with G R = U Sigma, restricted to the
    // kept columns (cols(G) x kept). Only filled when requested.
    Matrix right;
};

GradedSvd graded_svd(const std::vector<GradedColumn>& columns, std::size_t rank,
                     bool want_right = false);

// Rank of the unscaled contents (infinite-tier columns included).
std::size_t graded_rank(const std::vector<GradedColumn>& columns, double tau_rank);

} // namespace katolim

#endif
