#include "katolim/maps.hpp"

#include <cmath>
#include <random>

#include "katolim/eig.hpp"
#include "katolim/errors.hpp"
#include "katolim/linalg.hpp"

namespace katolim {

namespace {

// Construction-time sanity probe: Phi of a few fixed PSD inputs stays PSD.
// Deterministic seed so specs validate identically everywhere.
void spot_check_positivity(const PositiveMapSpec& phi) {
    std::mt19937_64 gen(0x9e3779b97f4a7c15ull);
    auto u01 = [&]() { return static_cast<double>(gen() >> 11) * 0x1p-53; };
    const std::size_t n = phi.in_dim();
    for (int trial = 0; trial < 3; ++trial) {
        Matrix g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                g(i, j) = cplx{2.0 * u01() - 1.0, 2.0 * u01() - 1.0};
        const Matrix x = g * g.adjoint();
        const HermitianMatrix y = phi.apply(HermitianMatrix::symmetrized(x));
        const double lo = min_eigenvalue(y);
        const double hi = std::max(1.0, std::abs(max_eigenvalue(y)));
        if (lo < -tol::psd * hi) {
            throw NotPositiveSemidefinite("map spec fails the PSD spot check");
        }
    }
}

} // namespace

void PositiveMapSpec::validate() const {
    if (kind_ == Kind::kraus || kind_ == Kind::congruence) {
        if (ops_.empty()) throw InputError("map spec needs at least one operator");
        for (const auto& k : ops_) {
            if (k.rows() != out_dim_ || k.cols() != in_dim_)
                throw DimensionMismatch("map operators must share dimensions");
            if (!k.all_finite()) throw InputError("map operator has non-finite entries");
        }
    }
    if (kind_ == Kind::trace_state) {
        const double tr = rho_.mat().trace_real();
        if (std::abs(tr - 1.0) > 1e-10)
            throw InputError("trace_state density must have unit trace");
    }
    spot_check_positivity(*this);
}

PositiveMapSpec PositiveMapSpec::kraus(std::vector<Matrix> operators) {
    PositiveMapSpec m;
    m.kind_ = Kind::kraus;
    if (operators.empty()) throw InputError("kraus list must be non-empty");
    m.out_dim_ = operators.front().rows();
    m.in_dim_ = operators.front().cols();
    m.ops_ = std::move(operators);
    m.validate();
    return m;
}

PositiveMapSpec PositiveMapSpec::congruence(Matrix k) {
    PositiveMapSpec m;
    m.kind_ = Kind::congruence;
    m.out_dim_ = k.rows();
    m.in_dim_ = k.cols();
    m.ops_.push_back(std::move(k));
    m.validate();
    return m;
}

PositiveMapSpec PositiveMapSpec::block_average(std::size_t block_dim) {
    PositiveMapSpec m;
    m.kind_ = Kind::block_average;
    m.in_dim_ = 2 * block_dim;
    m.out_dim_ = block_dim;
    m.validate();
    return m;
}

PositiveMapSpec PositiveMapSpec::trace_state(PSDMatrix rho) {
    PositiveMapSpec m;
    m.kind_ = Kind::trace_state;
    m.in_dim_ = rho.n();
    m.out_dim_ = 1;
    m.rho_ = std::move(rho);
    m.validate();
    return m;
}

Matrix PositiveMapSpec::apply(const Matrix& x) const {
    if (x.rows() != in_dim_ || x.cols() != in_dim_)
        throw DimensionMismatch("map input dimension mismatch");
    switch (kind_) {
        case Kind::congruence:
            return ops_.front() * x * ops_.front().adjoint();
        case Kind::kraus: {
            Matrix out(out_dim_, out_dim_);
            for (const auto& k : ops_) out += k * x * k.adjoint();
            return out;
        }
        case Kind::block_average: {
            const std::size_t n = out_dim_;
            Matrix out(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    out(i, j) = 0.5 * (x(i, j) + x(n + i, n + j));
            return out;
        }
        case Kind::trace_state: {
            Matrix out(1, 1);
            cplx t{0.0, 0.0};
            for (std::size_t i = 0; i < in_dim_; ++i)
                for (std::size_t j = 0; j < in_dim_; ++j) t += rho_(j, i) * x(i, j);
            out(0, 0) = t;
            return out;
        }
    }
    throw InputError("unknown map kind");
}

HermitianMatrix PositiveMapSpec::apply(const HermitianMatrix& x) const {
    return HermitianMatrix::symmetrized(apply(x.mat()));
}

PositiveMapSpec::Unitality PositiveMapSpec::is_unital(double tau) const {
    const HermitianMatrix phi_i =
        HermitianMatrix::symmetrized(apply(Matrix::identity(in_dim_)));
    const Matrix diff = phi_i.mat() - Matrix::identity(out_dim_);
    const bool unital = spectral_norm(diff) <= tau;
    return Unitality{unital, phi_i};
}

PositiveMapSpec PositiveMapSpec::support_compress() const {
    const HermitianMatrix phi_i =
        HermitianMatrix::symmetrized(apply(Matrix::identity(in_dim_)));
    const PSDMatrix psd = PSDMatrix::from(phi_i);
    const Matrix basis = range_basis(psd); // out_dim x r isometry
    const std::size_t r = basis.cols();
    if (r == 0) throw ZeroMap("map sends the identity to zero");
    if (r == out_dim_) return *this;
    const Matrix w = basis.adjoint(); // r x out_dim
    std::vector<Matrix> compressed;
    for (const auto& k : to_kraus()) compressed.push_back(w * k);
    return kraus(std::move(compressed));
}

std::vector<Matrix> PositiveMapSpec::to_kraus() const {
    switch (kind_) {
        case Kind::kraus:
        case Kind::congruence:
            return ops_;
        case Kind::block_average: {
            const std::size_t n = out_dim_;
            Matrix k1(n, 2 * n), k2(n, 2 * n);
            const double w = 1.0 / std::sqrt(2.0);
            for (std::size_t i = 0; i < n; ++i) {
                k1(i, i) = w;
                k2(i, n + i) = w;
            }
            return {k1, k2};
        }
        case Kind::trace_state: {
            // rho = sum w_j |x_j><x_j|  =>  K_j = sqrt(w_j) <x_j|.
            EigResult eg = eig_hermitian(rho_.herm());
            std::vector<Matrix> ks;
            for (std::size_t j = 0; j < eg.values.size(); ++j) {
                if (eg.values[j] <= tol::rank * std::max(eg.values.front(), 0.0)) continue;
                Matrix k(1, in_dim_);
                const double w = std::sqrt(eg.values[j]);
                for (std::size_t i = 0; i < in_dim_; ++i)
                    k(0, i) = w * std::conj(eg.vectors(i, j));
                ks.push_back(std::move(k));
            }
            if (ks.empty()) ks.push_back(Matrix(1, in_dim_));
            return ks;
        }
    }
    throw InputError("unknown map kind");
}

} // namespace katolim
