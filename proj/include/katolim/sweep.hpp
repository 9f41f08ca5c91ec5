#ifndef KATOLIM_SWEEP_HPP
#define KATOLIM_SWEEP_HPP

#include <optional>
#include <vector>

#include "katolim/kato.hpp"
#include "katolim/means.hpp"

namespace katolim {

/* Numeric p-sweep oracle.

   Each grid point evaluates its family member from the graded factorization
   of the inner matrix (see graded.hpp), so iterates stay faithful out to
   p = 2^14: the (1/p)-th root is taken on extended-range singular values,
   never on an assembled double matrix whose small eigenvalues would have
   drowned in rounding. A positive common scale is extracted per column and
   reapplied through the root, which keeps every reported matrix an ordinary
   double matrix.

   Grid points are independent; Execution::parallel runs them under OpenMP
   and produces bit-identical reports to the serial reference. */

enum class MonotoneFlag { decreasing, increasing, none };

struct ConvergenceReport {
    std::vector<double> p_grid;
    std::vector<HermitianMatrix> iterates;
    std::optional<HermitianMatrix> target;
    std::vector<double> errors;                      // ||iterate - target||_2, empty without target
    std::vector<std::vector<double>> eigenvalue_tracks; // sorted descending per p
    MonotoneFlag monotone_flag = MonotoneFlag::none;
    double max_violation = 0.0;
    double cauchy_delta = 0.0;
};

std::vector<double> default_grid(double p_max = 4096.0);

// (Phi(A^p))^{1/p} along the grid.
ConvergenceReport sweep_map(const PositiveMapSpec& phi, const PSDMatrix& a,
                            const std::vector<double>& p_grid,
                            const std::optional<HermitianMatrix>& target = std::nullopt,
                            Execution exec = Execution::parallel);

// (Phi(A^{-p}))^{-1/p}, powers in the generalized-inverse sense.
ConvergenceReport sweep_neg_map(const PositiveMapSpec& phi, const PSDMatrix& a,
                                const std::vector<double>& p_grid,
                                const std::optional<HermitianMatrix>& target = std::nullopt,
                                Execution exec = Execution::parallel);

// (A^p sigma B)^{1/p}. Small p evaluates the defining mean directly; large p
// requires a builtin mean and projection B and goes through the graded
// representation (for means vanishing at zero) or the powered-sum factor
// (arithmetic). The two routes agree on their overlap, which the tests pin.
ConvergenceReport sweep_mean(const MeanSpec& spec, const PSDMatrix& a, const PSDMatrix& b,
                             const std::vector<double>& p_grid,
                             const std::optional<HermitianMatrix>& target = std::nullopt,
                             Execution exec = Execution::parallel);

// (A^p !_{1/2} B^p)^{1/p}: the both-powered harmonic family whose limit is
// the spectral-order infimum.
ConvergenceReport sweep_inf(const PSDMatrix& a, const PSDMatrix& b,
                            const std::vector<double>& p_grid,
                            const std::optional<HermitianMatrix>& target = std::nullopt,
                            Execution exec = Execution::parallel);

// (A^p B A^p)^{1/p}: exploratory family, no closed-form target; the report
// carries Cauchy deltas only.
ConvergenceReport sweep_sandwich(const PSDMatrix& a, const PSDMatrix& b,
                                 const std::vector<double>& p_grid,
                                 Execution exec = Execution::parallel);

enum class LoewnerOrder { equal, less_equal, greater_equal, incomparable };

LoewnerOrder loewner_compare(const HermitianMatrix& x, const HermitianMatrix& y,
                             double tau = tol::psd);
std::string to_string(LoewnerOrder o);
std::string to_string(MonotoneFlag f);

} // namespace katolim

#endif
