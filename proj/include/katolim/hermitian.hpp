#ifndef KATOLIM_HERMITIAN_HPP
#define KATOLIM_HERMITIAN_HPP

#include "katolim/matrix.hpp"
#include "katolim/tolerances.hpp"

namespace katolim {

// Square matrix with H == H* within tol::herm. Construction symmetrizes,
// so downstream code can rely on exact entrywise symmetry.
class HermitianMatrix {
public:
    HermitianMatrix() = default;

    // Checked: throws NonHermitianInput when the defect exceeds tau, and
    // InputError on non-square or non-finite input.
    static HermitianMatrix from(const Matrix& m, double tau = tol::herm);
    // For results that are Hermitian by construction (V f(D) V*, sums of
    // such); symmetrizes without a defect check.
    static HermitianMatrix symmetrized(const Matrix& m);

    std::size_t n() const { return mat_.rows(); }
    const Matrix& mat() const { return mat_; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }

private:
    Matrix mat_;
};

// PSD wrapper: smallest eigenvalue >= -tol::psd * max(|largest|, 1).
class PSDMatrix {
public:
    PSDMatrix() = default;

    static PSDMatrix from(const HermitianMatrix& h, double tau = tol::psd);
    static PSDMatrix from(const Matrix& m, double tau = tol::psd);

    std::size_t n() const { return h_.n(); }
    const HermitianMatrix& herm() const { return h_; }
    const Matrix& mat() const { return h_.mat(); }
    const cplx& operator()(std::size_t i, std::size_t j) const { return h_(i, j); }

private:
    HermitianMatrix h_;
};

// Hermitian idempotent. rank = round(trace).
class Projection {
public:
    Projection() = default;

    static Projection from(const HermitianMatrix& h, double tau = tol::proj);
    static Projection from(const Matrix& m, double tau = tol::proj);
    static Projection zero(std::size_t n);

    std::size_t n() const { return h_.n(); }
    std::size_t rank() const { return rank_; }
    const HermitianMatrix& herm() const { return h_; }
    const Matrix& mat() const { return h_.mat(); }
    const cplx& operator()(std::size_t i, std::size_t j) const { return h_(i, j); }

    Projection complement() const;

private:
    HermitianMatrix h_;
    std::size_t rank_ = 0;
};

} // namespace katolim

#endif
