#include "ncs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncs::linalg {

namespace {

// Parlett-Reinsch balancing by powers of the radix; similarity-preserving.
void balance(Matrix& a) {
    constexpr double kRadix = 2.0;
    constexpr double kSqrdx = kRadix * kRadix;
    const std::size_t n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            }
            if (c == 0.0 || r == 0.0) {
                continue;
            }
            double g = r / kRadix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= kRadix;
                c *= kSqrdx;
            }
            g = r * kRadix;
            while (c > g) {
                f /= kRadix;
                c /= kSqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) {
                    a(i, j) *= g;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    a(j, i) *= f;
                }
            }
        }
    }
}

// Householder reduction to upper Hessenberg form in place.
void hessenberg(Matrix& a) {
    const std::size_t n = a.rows();
    if (n < 3) {
        return;
    }
    Vector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            alpha += a(i, k) * a(i, k);
        }
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) {
            continue;
        }
        if (a(k + 1, k) > 0.0) {
            alpha = -alpha;
        }
        std::fill(v.begin(), v.end(), 0.0);
        v[k + 1] = a(k + 1, k) - alpha;
        for (std::size_t i = k + 2; i < n; ++i) {
            v[i] = a(i, k);
        }
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) {
            continue;
        }
        const double beta = 2.0 / vnorm2;
        // A ← H A
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) {
                s += v[i] * a(i, j);
            }
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) {
                a(i, j) -= s * v[i];
            }
        }
        // A ← A H
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                s += a(i, j) * v[j];
            }
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) -= s * v[j];
            }
        }
        for (std::size_t i = k + 2; i < n; ++i) {
            a(i, k) = 0.0;
        }
    }
}

// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
// Iteration budget is 30·n per eigenvalue; exceptional shifts every 10 steps.
std::vector<std::complex<double>> hqr(Matrix& a) {
    const int n = static_cast<int>(a.rows());
    const double eps = std::numeric_limits<double>::epsilon();
    const int max_its = 30 * std::max(n, 1);
    std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
    auto A = [&](int r, int c) -> double& {
        return a(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    };

    double anorm = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(i - 1, 0); j < n; ++j) {
            anorm += std::abs(A(i, j));
        }
    }

    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l > 0; --l) {
                double s = std::abs(A(l - 1, l - 1)) + std::abs(A(l, l));
                if (s == 0.0) {
                    s = anorm;
                }
                if (std::abs(A(l, l - 1)) <= eps * s) {
                    A(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = A(nn, nn);
            if (l == nn) {
                w[static_cast<std::size_t>(nn)] = {x + t, 0.0};
                --nn;
                continue;
            }
            double y = A(nn - 1, nn - 1);
            double ww = A(nn, nn - 1) * A(nn - 1, nn);
            if (l == nn - 1) {
                const double p = 0.5 * (y - x);
                const double q = p * p + ww;
                double z = std::sqrt(std::abs(q));
                x += t;
                if (q >= 0.0) {
                    z = p + std::copysign(z, p);
                    const double hi = x + z;
                    const double lo = z != 0.0 ? x - ww / z : hi;
                    w[static_cast<std::size_t>(nn - 1)] = {hi, 0.0};
                    w[static_cast<std::size_t>(nn)] = {lo, 0.0};
                } else {
                    w[static_cast<std::size_t>(nn - 1)] = {x + p, z};
                    w[static_cast<std::size_t>(nn)] = {x + p, -z};
                }
                nn -= 2;
                continue;
            }

            if (its == max_its) {
                throw NoConvergence("eigenvalues: Francis QR exceeded " + std::to_string(max_its) +
                                    " iterations");
            }
            if (its > 0 && its % 10 == 0) {
                t += x;
                for (int i = 0; i <= nn; ++i) {
                    A(i, i) -= x;
                }
                const double s = std::abs(A(nn, nn - 1)) + std::abs(A(nn - 1, nn - 2));
                x = y = 0.75 * s;
                ww = -0.4375 * s * s;
            }
            ++its;

            int m = nn - 2;
            double p = 0.0;
            double q = 0.0;
            double r = 0.0;
            double z = 0.0;
            for (; m >= l; --m) {
                z = A(m, m);
                r = x - z;
                double s = y - z;
                p = (r * s - ww) / A(m + 1, m) + A(m, m + 1);
                q = A(m + 1, m + 1) - z - r - s;
                r = A(m + 2, m + 1);
                s = std::abs(p) + std::abs(q) + std::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) {
                    break;
                }
                const double u = std::abs(A(m, m - 1)) * (std::abs(q) + std::abs(r));
                const double v =
                    std::abs(p) * (std::abs(A(m - 1, m - 1)) + std::abs(z) + std::abs(A(m + 1, m + 1)));
                if (u <= eps * v) {
                    break;
                }
            }
            for (int i = m; i < nn - 1; ++i) {
                A(i + 2, i) = 0.0;
                if (i != m) {
                    A(i + 2, i - 1) = 0.0;
                }
            }
            for (int k = m; k < nn; ++k) {
                if (k != m) {
                    p = A(k, k - 1);
                    q = A(k + 1, k - 1);
                    r = 0.0;
                    if (k + 1 != nn) {
                        r = A(k + 2, k - 1);
                    }
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x != 0.0) {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
                if (s == 0.0) {
                    continue;
                }
                if (k == m) {
                    if (l != m) {
                        A(k, k - 1) = -A(k, k - 1);
                    }
                } else {
                    A(k, k - 1) = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for (int j = k; j <= nn; ++j) {
                    p = A(k, j) + q * A(k + 1, j);
                    if (k + 1 != nn) {
                        p += r * A(k + 2, j);
                        A(k + 2, j) -= p * z;
                    }
                    A(k + 1, j) -= p * y;
                    A(k, j) -= p * x;
                }
                const int mmin = nn < k + 3 ? nn : k + 3;
                for (int i = l; i <= mmin; ++i) {
                    p = x * A(i, k) + y * A(i, k + 1);
                    if (k + 1 != nn) {
                        p += z * A(i, k + 2);
                        A(i, k + 2) -= p * r;
                    }
                    A(i, k + 1) -= p * q;
                    A(i, k) -= p;
                }
            }
        } while (l + 1 < nn);
    }
    return w;
}

} // namespace

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
    if (!a.is_square()) {
        throw DimensionMismatch("eigenvalues: matrix is not square");
    }
    if (!a.all_finite()) {
        throw InvalidArgument("eigenvalues: non-finite entries");
    }
    Matrix h = a;
    balance(h);
    hessenberg(h);
    auto w = hqr(h);
    std::sort(w.begin(), w.end(), [](const auto& x, const auto& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return w;
}

double spectral_abscissa(const Matrix& a) {
    if (a.rows() == 0) {
        throw InvalidArgument("spectral_abscissa: empty matrix");
    }
    const auto w = eigenvalues(a);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& z : w) {
        best = std::max(best, z.real());
    }
    return best;
}

} // namespace ncs::linalg
