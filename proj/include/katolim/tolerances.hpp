#ifndef KATOLIM_TOLERANCES_HPP
#define KATOLIM_TOLERANCES_HPP

namespace katolim::tol {

// Double precision with headroom for dimensions up to ~32.
inline constexpr double herm = 1e-12;       // Hermitian symmetry defect
inline constexpr double proj = 1e-9;        // projection idempotence / orthogonality
inline constexpr double rank = 1e-9;        // rank decisions, relative to largest scale
inline constexpr double abs_floor = 1e-300; // absolute floor under relative rank tests
inline constexpr double group = 1e-8;       // eigenvalue clustering, relative
inline constexpr double zero = 1e-12;       // kernel routing, relative
inline constexpr double recon = 1e-10;      // spectral reconstruction, relative
inline constexpr double psd = 1e-9;         // Loewner slack / PSD admission

} // namespace katolim::tol

#endif
