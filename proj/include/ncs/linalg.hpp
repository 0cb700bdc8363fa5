#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "ncs/error.hpp"

namespace ncs::linalg {

using Vector = std::vector<double>;

/**
 * Dense real matrix, row-major storage.
 *
 * Construction from user data rejects NaN/Inf. Arithmetic results are not
 * re-validated, so a propagator that overflows can still be inspected by the
 * caller (the simulator relies on this to flag divergence).
 */
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix diagonal(std::span<const double> diag);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }

    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] bool all_finite() const noexcept;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s) noexcept;

    friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
    friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
    friend Matrix operator*(Matrix m, double s) { return m *= s; }
    friend Matrix operator*(double s, Matrix m) { return m *= s; }
    friend Matrix operator-(Matrix m) { return m *= -1.0; }
    friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);
    friend Vector operator*(const Matrix& m, std::span<const double> x);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

[[nodiscard]] double frobenius_norm(const Matrix& a) noexcept;
[[nodiscard]] double norm1(const Matrix& a) noexcept;
[[nodiscard]] double norm2(std::span<const double> x) noexcept;
[[nodiscard]] double dot(std::span<const double> x, std::span<const double> y);
/// xᵀ S x
[[nodiscard]] double quadratic_form(const Matrix& s, std::span<const double> x);
[[nodiscard]] Matrix symmetrize(const Matrix& a);
[[nodiscard]] bool is_symmetric(const Matrix& a, double rel_tol = 1e-10) noexcept;

/// Solves a·X = b with partial pivoting. Throws SingularMatrix when a pivot
/// falls below 1e-13·‖a‖.
[[nodiscard]] Matrix solve_linear(const Matrix& a, const Matrix& b);
[[nodiscard]] Matrix inverse(const Matrix& a);

/// Lower-triangular L with L·Lᵀ = s. Throws NotPositiveDefinite on a
/// non-positive pivot, InvalidArgument when s is not symmetric.
[[nodiscard]] Matrix cholesky(const Matrix& s);
[[nodiscard]] bool is_positive_definite(const Matrix& s);

struct SymEig {
    Vector eigenvalues;  ///< ascending
    Matrix eigenvectors; ///< columns, orthonormal
};

/// Cyclic Jacobi. Converged when the off-diagonal norm is ≤ 1e-12·‖s‖.
[[nodiscard]] SymEig sym_eig(const Matrix& s);
[[nodiscard]] double lambda_min(const Matrix& s);
[[nodiscard]] double lambda_max(const Matrix& s);

/// All eigenvalues of a general real matrix: balancing, Householder
/// Hessenberg reduction and Francis double-shift QR. Sorted by (real, imag).
[[nodiscard]] std::vector<std::complex<double>> eigenvalues(const Matrix& a);
/// max Re λ(a).
[[nodiscard]] double spectral_abscissa(const Matrix& a);
[[nodiscard]] inline bool is_hurwitz(const Matrix& a) { return spectral_abscissa(a) < 0.0; }

/// e^{a·t}: scaling and squaring around the degree-13 Padé approximant.
[[nodiscard]] Matrix expm(const Matrix& a, double t = 1.0);

inline constexpr std::size_t kMaxLyapunovDim = 30;

/// P with aᵀP + P·a + q = 0, via the d²×d² Kronecker system. The result is
/// symmetrized. Throws SingularMatrix when two eigenvalues of a sum to ~0.
[[nodiscard]] Matrix lyap_solve(const Matrix& a, const Matrix& q);

} // namespace ncs::linalg
