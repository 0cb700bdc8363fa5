#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ncs/certificates.hpp"
#include "ncs/linalg.hpp"

namespace testsupport {

using ncs::linalg::Matrix;
using ncs::linalg::Vector;

inline Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            m(i, j) = u(rng);
        }
    }
    return m;
}

inline Vector random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(n);
    for (double& x : v) {
        x = u(rng);
    }
    return v;
}

/// Random matrix shifted left so its abscissa lies in [-1, -0.05].
inline Matrix random_hurwitz(std::size_t n, std::mt19937_64& rng) {
    Matrix a = random_matrix(n, n, rng, -2.0, 2.0);
    std::uniform_real_distribution<double> margin(0.05, 1.0);
    const double shift = ncs::linalg::spectral_abscissa(a) + margin(rng);
    return a - shift * Matrix::identity(n);
}

inline Matrix diag(std::vector<double> v) {
    return Matrix::diagonal(v);
}

/// ẋ = A x integrated by classical RK4 with step doubling; the local error
/// estimate is held below tol relative to the state norm.
inline Vector rk4_oracle(const Matrix& a, Vector x, double t_end, double tol = 1e-10) {
    auto f = [&](const Vector& y) { return a * y; };
    auto step = [&](const Vector& y, double h) {
        auto axpy = [](const Vector& p, const Vector& q, double s) {
            Vector r(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) {
                r[i] = p[i] + s * q[i];
            }
            return r;
        };
        const Vector k1 = f(y);
        const Vector k2 = f(axpy(y, k1, h / 2));
        const Vector k3 = f(axpy(y, k2, h / 2));
        const Vector k4 = f(axpy(y, k3, h));
        Vector out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            out[i] = y[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
        return out;
    };
    auto norm = [](const Vector& v) {
        double s = 0.0;
        for (double e : v) {
            s += e * e;
        }
        return std::sqrt(s);
    };
    double t = 0.0;
    double h = 1e-2;
    while (t < t_end) {
        h = std::min(h, t_end - t);
        const Vector full = step(x, h);
        const Vector half = step(step(x, h / 2), h / 2);
        double err = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            err = std::max(err, std::abs(full[i] - half[i]));
        }
        const double scale = std::max(norm(half), 1e-300);
        if (err / scale <= tol || h < 1e-9) {
            t += h;
            x = half;
            h *= 1.5;
        } else {
            h *= 0.5;
        }
    }
    return x;
}

/// ‖AᵀP + PA + Q‖_F.
inline double lyap_residual(const Matrix& a, const Matrix& p, const Matrix& q) {
    return ncs::linalg::frobenius_norm(a.transpose() * p + p * a + q);
}

// Four-state benchmark pair (closed loop A + BK).
inline std::vector<ncs::PlantSpec> benchmark_plants() {
    Matrix a1 = diag({1.2, 0.8, 0.4, 0.2});
    Matrix b1{{1, 0}, {0, 1}, {1, 0}, {0, 1}};
    Matrix k1{{-40.2184, 0, 23.5546, 0}, {0, -34.4621, 0, 18.7252}};
    Matrix a2 = diag({0.2, 0.1, 0.05, -1.0});
    Matrix b2{{1, 1}, {1, 1}, {1, 1}, {1, 1}};
    const std::vector<double> row{-863.1, 1195.0, -463.4, -10.2};
    Matrix k2(2, 4);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            k2(r, c) = row[c];
        }
    }
    return {ncs::make_plant(1, a1, b1, k1), ncs::make_plant(2, a2, b2, k2)};
}

// Two identical plants whose certificates at λ_s = 2, λ_u = -1 are
// P_s ∝ diag(1, 1/e), P_u ∝ diag(1/e, 1), so μ_su = μ_us = e.
inline ncs::PlantSpec synthetic_plant(int index) {
    const double e = std::exp(1.0);
    Matrix a_s = diag({-2.0, -1.0 - e});
    Matrix a_u = diag({0.5 - 0.25 * e, 0.25});
    return ncs::make_plant(index, a_u, Matrix::identity(2), a_s - a_u);
}

inline ncs::LambdaGrid synthetic_grid() {
    ncs::LambdaGrid g;
    g.s_min = 2.0;
    g.s_max = 2.0;
    g.u_min = -1.0;
    g.u_max = -1.0;
    return g;
}

/// Certificate carrying only rates and jump factors (P = I of size dim).
inline ncs::PlantCertificate rate_certificate(int plant, double lambda_s, double lambda_u,
                                              double mu_su, double mu_us, std::size_t dim = 1) {
    ncs::PlantCertificate c;
    c.plant = plant;
    c.stable = {ncs::Mode::stable, Matrix::identity(dim), lambda_s, 1.0};
    c.unstable = {ncs::Mode::unstable, Matrix::identity(dim), lambda_u, 1.0};
    c.mu_su = mu_su;
    c.mu_us = mu_us;
    return c;
}

inline std::vector<ncs::PlantCertificate> uniform_certificates(int n, double lambda_s,
                                                               double lambda_u, double mu) {
    std::vector<ncs::PlantCertificate> out;
    for (int i = 1; i <= n; ++i) {
        out.push_back(rate_certificate(i, lambda_s, lambda_u, mu, mu));
    }
    return out;
}

/// Feasible instance with N plants: fast closed loops, slow open loops.
inline std::vector<ncs::PlantSpec> easy_plants(int n, std::mt19937_64& rng) {
    std::vector<ncs::PlantSpec> out;
    std::uniform_real_distribution<double> slow(0.02, 0.08);
    std::uniform_real_distribution<double> fast(3.0, 5.0);
    std::uniform_real_distribution<double> mix(-0.3, 0.3);
    for (int i = 1; i <= n; ++i) {
        Matrix a{{slow(rng), mix(rng)}, {0.0, -slow(rng)}};
        Matrix closed{{-fast(rng), mix(rng)}, {mix(rng), -fast(rng)}};
        out.push_back(ncs::make_plant(i, a, Matrix::identity(2), closed - a));
    }
    return out;
}

} // namespace testsupport
