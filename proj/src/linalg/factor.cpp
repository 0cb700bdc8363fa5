#include "ncs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ncs::linalg {

Matrix solve_linear(const Matrix& a, const Matrix& b) {
    if (!a.is_square()) {
        throw DimensionMismatch("solve_linear: coefficient matrix is not square");
    }
    if (b.rows() != a.rows()) {
        throw DimensionMismatch("solve_linear: right-hand side has wrong row count");
    }
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    const double threshold = 1e-13 * frobenius_norm(a);

    Matrix lu = a;
    Matrix x = b;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            if (std::abs(lu(r, k)) > best) {
                best = std::abs(lu(r, k));
                piv = r;
            }
        }
        if (best < threshold || best == 0.0) {
            throw SingularMatrix("solve_linear: pivot " + std::to_string(best) + " in column " +
                                 std::to_string(k));
        }
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(lu(k, c), lu(piv, c));
            }
            for (std::size_t c = 0; c < m; ++c) {
                std::swap(x(k, c), x(piv, c));
            }
        }
        const double inv = 1.0 / lu(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = lu(r, k) * inv;
            if (f == 0.0) {
                continue;
            }
            lu(r, k) = 0.0;
            for (std::size_t c = k + 1; c < n; ++c) {
                lu(r, c) -= f * lu(k, c);
            }
            for (std::size_t c = 0; c < m; ++c) {
                x(r, c) -= f * x(k, c);
            }
        }
    }
    // back substitution
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t c = 0; c < m; ++c) {
            double acc = x(kk, c);
            for (std::size_t j = kk + 1; j < n; ++j) {
                acc -= lu(kk, j) * x(j, c);
            }
            x(kk, c) = acc / lu(kk, kk);
        }
    }
    return x;
}

Matrix inverse(const Matrix& a) {
    return solve_linear(a, Matrix::identity(a.rows()));
}

Matrix cholesky(const Matrix& s) {
    if (!s.is_square()) {
        throw DimensionMismatch("cholesky: matrix is not square");
    }
    if (!is_symmetric(s, 1e-10)) {
        throw InvalidArgument("cholesky: matrix is not symmetric");
    }
    const std::size_t n = s.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = s(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > 0.0)) {
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(d) + " at index " +
                                      std::to_string(j));
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = s(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                acc -= l(i, k) * l(j, k);
            }
            l(i, j) = acc / ljj;
        }
    }
    return l;
}

bool is_positive_definite(const Matrix& s) {
    try {
        (void)cholesky(s);
        return true;
    } catch (const NotPositiveDefinite&) {
        return false;
    }
}

SymEig sym_eig(const Matrix& s) {
    if (!s.is_square()) {
        throw DimensionMismatch("sym_eig: matrix is not square");
    }
    if (!is_symmetric(s, 1e-10)) {
        throw InvalidArgument("sym_eig: matrix is not symmetric");
    }
    const std::size_t n = s.rows();
    Matrix a = symmetrize(s);
    Matrix v = Matrix::identity(n);
    const double target = 1e-12 * frobenius_norm(s);

    auto off_norm = [&] {
        double acc = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                acc += 2.0 * a(p, q) * a(p, q);
            }
        }
        return std::sqrt(acc);
    };

    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    for (; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    if (off_norm() > target) {
        throw NoConvergence("sym_eig: Jacobi did not converge in 100 sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    SymEig out{Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) {
            out.eigenvectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

double lambda_min(const Matrix& s) {
    return sym_eig(s).eigenvalues.front();
}

double lambda_max(const Matrix& s) {
    return sym_eig(s).eigenvalues.back();
}

} // namespace ncs::linalg
