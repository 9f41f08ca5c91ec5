#ifndef KATOLIM_MAPS_HPP
#define KATOLIM_MAPS_HPP

#include <vector>

#include "katolim/hermitian.hpp"

namespace katolim {

// Declarative positive linear map Phi: M_n -> M_n'. A closed enumeration of
// kinds (rather than callbacks) so specs serialize and CLI runs reproduce.
// Every kind is completely positive and converts to a Kraus list, which is
// what the sweep kernels consume.
class PositiveMapSpec {
public:
    enum class Kind { kraus, congruence, block_average, trace_state };

    static PositiveMapSpec kraus(std::vector<Matrix> operators);
    static PositiveMapSpec congruence(Matrix k);
    static PositiveMapSpec block_average(std::size_t block_dim); // M_2n -> M_n
    static PositiveMapSpec trace_state(PSDMatrix rho);           // X -> [Tr(rho X)]

    Kind kind() const { return kind_; }
    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }
    const std::vector<Matrix>& operators() const { return ops_; }
    const PSDMatrix& state() const { return rho_; }

    HermitianMatrix apply(const HermitianMatrix& x) const;
    Matrix apply(const Matrix& x) const;

    struct Unitality {
        bool unital;
        HermitianMatrix witness; // Phi(I)
    };
    Unitality is_unital(double tau = 1e-10) const;

    // Restriction to the support of Phi(I): out_dim becomes rank(Phi(I)),
    // realized by compressing each Kraus operator with an isometry onto the
    // range. Strictly positive maps come back unchanged.
    PositiveMapSpec support_compress() const;

    // Kraus form; exact for every kind.
    std::vector<Matrix> to_kraus() const;

private:
    PositiveMapSpec() = default;
    void validate() const;

    Kind kind_ = Kind::kraus;
    std::size_t in_dim_ = 0, out_dim_ = 0;
    std::vector<Matrix> ops_; // kraus list or the single congruence operator
    PSDMatrix rho_;
};

} // namespace katolim

#endif
