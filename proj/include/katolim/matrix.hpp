#ifndef KATOLIM_MATRIX_HPP
#define KATOLIM_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace katolim {

using cplx = std::complex<double>;

// Dense complex matrix, row-major. General (possibly rectangular) entries;
// symmetry-constrained wrappers live in hermitian.hpp.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

    static Matrix identity(std::size_t n);
    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix diagonal(const std::vector<double>& d);
    // Rank-one |v><v|.
    static Matrix outer(const std::vector<cplx>& v);
    static Matrix direct_sum(const Matrix& a, const Matrix& b);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }

    Matrix adjoint() const;
    Matrix transpose() const;
    Matrix conjugate() const;

    std::vector<cplx> column(std::size_t j) const;
    void set_column(std::size_t j, const std::vector<cplx>& v);

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cplx s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

    std::vector<cplx> apply(const std::vector<cplx>& v) const;

    double frobenius_norm() const;
    double max_abs() const;
    // max_ij |M[i][j] - conj(M[j][i])|
    double hermiticity_defect() const;
    bool all_finite() const;
    double trace_real() const;
    cplx trace() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

double dot_abs(const std::vector<cplx>& v);            // Euclidean norm
cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b); // <a|b>, conjugate-linear in a

} // namespace katolim

#endif
