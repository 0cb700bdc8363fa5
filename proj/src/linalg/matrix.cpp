#include "ncs/linalg.hpp"

#include <cmath>
#include <string>

namespace ncs::linalg {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
    }
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionMismatch("matrix data has " + std::to_string(data_.size()) +
                                " entries, expected " + std::to_string(rows_ * cols_));
    }
    if (!all_finite()) {
        throw InvalidArgument("matrix entries must be finite");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw DimensionMismatch("ragged matrix literal");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
    if (!all_finite()) {
        throw InvalidArgument("matrix entries must be finite");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        m(i, i) = diag[i];
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

bool Matrix::all_finite() const noexcept {
    for (double v : data_) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    require_same_shape(*this, rhs, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += rhs.data_[i];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    require_same_shape(*this, rhs, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= rhs.data_[i];
    }
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols_ != rhs.rows_) {
        throw DimensionMismatch("matrix product: inner dimensions " + std::to_string(lhs.cols_) +
                                " and " + std::to_string(rhs.rows_));
    }
    Matrix out(lhs.rows_, rhs.cols_);
    for (std::size_t i = 0; i < lhs.rows_; ++i) {
        for (std::size_t k = 0; k < lhs.cols_; ++k) {
            const double a = lhs(i, k);
            if (a == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

Vector operator*(const Matrix& m, std::span<const double> x) {
    if (m.cols_ != x.size()) {
        throw DimensionMismatch("matrix-vector product: " + std::to_string(m.cols_) + " vs " +
                                std::to_string(x.size()));
    }
    Vector y(m.rows_, 0.0);
    for (std::size_t i = 0; i < m.rows_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols_; ++j) {
            acc += m(i, j) * x[j];
        }
        y[i] = acc;
    }
    return y;
}

double frobenius_norm(const Matrix& a) noexcept {
    double acc = 0.0;
    for (double v : a.data()) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

double norm1(const Matrix& a) noexcept {
    double best = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        double col = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            col += std::abs(a(r, c));
        }
        best = std::max(best, col);
    }
    return best;
}

double norm2(std::span<const double> x) noexcept {
    double acc = 0.0;
    for (double v : x) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DimensionMismatch("dot: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i] * y[i];
    }
    return acc;
}

double quadratic_form(const Matrix& s, std::span<const double> x) {
    if (!s.is_square() || s.rows() != x.size()) {
        throw DimensionMismatch("quadratic form: shape mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            row += s(i, j) * x[j];
        }
        acc += x[i] * row;
    }
    return acc;
}

Matrix symmetrize(const Matrix& a) {
    Matrix s = a;
    s += a.transpose();
    s *= 0.5;
    return s;
}

bool is_symmetric(const Matrix& a, double rel_tol) noexcept {
    if (!a.is_square()) {
        return false;
    }
    const double scale = frobenius_norm(a);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = r + 1; c < a.cols(); ++c) {
            if (std::abs(a(r, c) - a(c, r)) > rel_tol * scale) {
                return false;
            }
        }
    }
    return true;
}

} // namespace ncs::linalg
