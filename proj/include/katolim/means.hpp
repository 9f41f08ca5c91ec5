#ifndef KATOLIM_MEANS_HPP
#define KATOLIM_MEANS_HPP

#include <functional>
#include <string>

#include "katolim/linalg.hpp"
#include "katolim/xfloat.hpp"

namespace katolim {

/* Operator means via representing functions.

   A mean is specified by a function f on (0, inf) with f(1) = 1; the mean of
   positive definite A and B is A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2},
   extended to singular arguments by the decreasing epsilon-limit. For the
   builtins f is operator monotone by construction; custom functions are
   only screened by necessary conditions (nondecreasing and concave on a log
   grid), certifying full operator monotonicity is on the caller. */
class MeanSpec {
public:
    enum class Kind { arithmetic, geometric, harmonic, logarithmic, custom };

    static MeanSpec arithmetic(double alpha);        // (1-a) + a x
    static MeanSpec geometric(double alpha);         // x^a
    static MeanSpec harmonic(double alpha);          // x / ((1-a) x + a)
    static MeanSpec logarithmic();                   // (x-1)/log x
    static MeanSpec custom(std::string name, std::function<double(double)> f,
                           double f_at_zero, double alpha);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double alpha() const { return alpha_; }
    double f_at_zero() const { return f0_; }

    double f(double x) const;        // x > 0
    double f_tilde(double x) const;  // x f(1/x)
    double f_hat(double x) const;    // f(x)/x for x > 0, 0 at x = 0

    // Swapping the mean's arguments corresponds to the transposed function.
    MeanSpec transpose() const;

private:
    MeanSpec() = default;
    void screen() const;

    Kind kind_ = Kind::custom;
    std::string name_;
    double alpha_ = 0.5;
    double f0_ = 0.0;
    std::function<double(double)> fcustom_;
};

// A sigma B. Positive definite A uses the representing formula directly;
// singular A goes through the epsilon-limit with a Cauchy stop at 1e-9 and
// throws NoConvergence if the schedule ends unsettled.
PSDMatrix mean_eval(const MeanSpec& spec, const PSDMatrix& a, const PSDMatrix& b);

// A sigma E for a projection E through f_hat(E A^{-1} E). Requires f(0) = 0
// and positive definite A.
PSDMatrix mean_projection_eval(const MeanSpec& spec, const PSDMatrix& a, const Projection& e);

// lim_{p->inf} (A^p #_alpha B)^{1/p}: level meets of A's spectral
// filtration with the support of B, weighted a_k^{1-alpha}. alpha = 0 and 1
// return A and the support projection exactly.
PSDMatrix geometric_limit(const PSDMatrix& a, const PSDMatrix& b, double alpha,
                          double tau_rank = tol::rank, double tau_group = tol::group);

enum class PowerMonotonicity { pmi, pmd, both, neither };
PowerMonotonicity classify_power_monotonicity(const MeanSpec& spec);
std::string to_string(PowerMonotonicity c);

// lim_{p->inf} f_tilde(x^p)^{1/p}. Closed for the builtins; numeric with an
// error bound for custom specs.
struct FTildeInfinity {
    double value;
    double error_bound; // 0 for closed forms
};
FTildeInfinity f_tilde_infinity(const MeanSpec& spec, double x);

// f_hat evaluated on an extended-range argument; the graded sweep applies
// it to spectra far outside double range. Builtins only.
XReal f_hat_extended(const MeanSpec& spec, const XReal& x);

} // namespace katolim

#endif
