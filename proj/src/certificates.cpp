#include "ncs/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ncs {

using linalg::cholesky;
using linalg::frobenius_norm;
using linalg::lyap_solve;
using linalg::solve_linear;
using linalg::spectral_abscissa;

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

ModeCertificate shifted_certificate(Mode mode, const Matrix& a, double lambda,
                                    const CertificateOptions& opts) {
    const std::size_t d = a.rows();
    Matrix shifted = a + (0.5 * lambda) * Matrix::identity(d);
    Matrix p = lyap_solve(shifted, Matrix::identity(d));
    const auto eig = linalg::sym_eig(p);
    const double top = eig.eigenvalues.back();
    if (!(top > 0.0) || !(eig.eigenvalues.front() > 0.0)) {
        throw InternalInconsistency("shifted Lyapunov solution is not positive definite");
    }
    p *= 1.0 / top;
    p = linalg::symmetrize(p);
    ModeCertificate cert{mode, std::move(p), lambda, eig.eigenvalues.front() / top};
    if (cert.kappa_eff < opts.kappa_floor) {
        throw IllConditioned(cert.kappa_eff, "certificate condition " + fmt_double(cert.kappa_eff) +
                                                 " below kappa floor " +
                                                 fmt_double(opts.kappa_floor));
    }
    return cert;
}

void require_square(const Matrix& a, const char* who) {
    if (!a.is_square() || a.rows() == 0) {
        throw DimensionMismatch(std::string(who) + ": matrix must be square and non-empty");
    }
}

} // namespace

PlantSpec make_plant(int index, Matrix a, Matrix b, Matrix k) {
    const std::string tag = "plant " + std::to_string(index);
    if (!a.is_square() || a.rows() == 0) {
        throw DimensionMismatch(tag + ": A must be square and non-empty");
    }
    const std::size_t d = a.rows();
    if (b.rows() != d) {
        throw DimensionMismatch(tag + ": B must have " + std::to_string(d) + " rows");
    }
    if (k.cols() != d || k.rows() != b.cols()) {
        throw DimensionMismatch(tag + ": K must be " + std::to_string(b.cols()) + "x" +
                                std::to_string(d));
    }
    PlantSpec plant{index, std::move(a), std::move(b), std::move(k)};
    const double abscissa = spectral_abscissa(plant.closed_loop());
    if (!(abscissa < 0.0)) {
        throw AssumptionViolated(index, tag + ": closed loop A+BK is not Hurwitz (abscissa " +
                                            fmt_double(abscissa) + ")");
    }
    return plant;
}

void check_open_loop_unstable(const std::vector<PlantSpec>& plants) {
    for (const auto& plant : plants) {
        if (linalg::is_hurwitz(plant.a)) {
            throw AssumptionViolated(plant.index, "plant " + std::to_string(plant.index) +
                                                      ": open loop A is Hurwitz; every plant "
                                                      "must be open-loop unstable");
        }
    }
}

void LambdaGrid::validate() const {
    if (!(s_min > 0.0)) {
        throw InvalidArgument("lambda grid: lambda_s_min must be > 0");
    }
    if (!(s_max >= s_min)) {
        throw InvalidArgument("lambda grid: lambda_s_max must be >= lambda_s_min");
    }
    if (!(h_s > 0.0) || !(h_u > 0.0)) {
        throw InvalidArgument("lambda grid: step sizes must be > 0");
    }
    if (!(u_max <= 0.0)) {
        throw InvalidArgument("lambda grid: lambda_u_max must be <= 0");
    }
    if (!(u_min <= u_max)) {
        throw InvalidArgument("lambda grid: lambda_u_min must be <= lambda_u_max");
    }
}

std::size_t LambdaGrid::s_count() const {
    return static_cast<std::size_t>(std::floor((s_max - s_min) / h_s + 1e-9)) + 1;
}

std::size_t LambdaGrid::u_count() const {
    return static_cast<std::size_t>(std::floor((u_max - u_min) / h_u + 1e-9)) + 1;
}

ModeCertificate stable_certificate(const Matrix& a_s, double lambda, CertificateOptions opts) {
    require_square(a_s, "stable_certificate");
    if (!(lambda > 0.0)) {
        throw InvalidArgument("stable_certificate: lambda must be > 0");
    }
    const double bound = -2.0 * spectral_abscissa(a_s);
    if (!(lambda < bound)) {
        throw Infeasible(bound, "stable rate " + fmt_double(lambda) +
                                    " infeasible; supremum is " + fmt_double(bound));
    }
    return shifted_certificate(Mode::stable, a_s, lambda, opts);
}

ModeCertificate unstable_certificate(const Matrix& a_u, double lambda, CertificateOptions opts) {
    require_square(a_u, "unstable_certificate");
    if (!(lambda <= 0.0)) {
        throw InvalidArgument("unstable_certificate: lambda must be <= 0");
    }
    const double bound = -2.0 * spectral_abscissa(a_u);
    if (!(lambda < bound)) {
        throw Infeasible(bound, "growth rate " + fmt_double(-lambda) +
                                    " infeasible; must exceed " + fmt_double(-bound));
    }
    return shifted_certificate(Mode::unstable, a_u, lambda, opts);
}

namespace detail {

double generalized_lambda_max(const Matrix& p_from, const Matrix& p_to) {
    if (p_from.rows() != p_to.rows() || !p_from.is_square() || !p_to.is_square()) {
        throw DimensionMismatch("jump_factor: dimension mismatch");
    }
    const Matrix l = cholesky(p_from);
    (void)cholesky(p_to);
    // L⁻¹ p_to L⁻ᵀ; p_to is symmetric so (L⁻¹ p_to)ᵀ = p_to L⁻ᵀ.
    const Matrix half = solve_linear(l, p_to);
    const Matrix whole = solve_linear(l, half.transpose());
    return linalg::lambda_max(linalg::symmetrize(whole));
}

} // namespace detail

double jump_factor(const Matrix& p_from, const Matrix& p_to) {
    const double mu = detail::generalized_lambda_max(p_from, p_to);
    if (mu < 1.0 - 1e-6) {
        throw InternalInconsistency("jump factor " + fmt_double(mu) + " below 1");
    }
    if (mu < 1.0 && mu >= 1.0 - 1e-10) {
        return 1.0;
    }
    return mu;
}

std::optional<PlantCertificate> certify_plant(const PlantSpec& plant, double lambda_s,
                                              double lambda_u, CertificateOptions opts) {
    try {
        PlantCertificate cert;
        cert.plant = plant.index;
        cert.stable = stable_certificate(plant.closed_loop(), lambda_s, opts);
        cert.unstable = unstable_certificate(plant.open_loop(), lambda_u, opts);
        cert.mu_su = jump_factor(cert.stable.p, cert.unstable.p);
        cert.mu_us = jump_factor(cert.unstable.p, cert.stable.p);
        return cert;
    } catch (const Infeasible&) {
        return std::nullopt;
    } catch (const IllConditioned&) {
        return std::nullopt;
    }
}

CertificateSet certify_all(const std::vector<PlantSpec>& plants, const LambdaGrid& grid,
                           CertificateOptions opts) {
    grid.validate();
    if (plants.empty()) {
        throw InvalidArgument("certify_all: no plants");
    }

    // Stable feasibility depends only on λ_s and unstable only on λ_u, so the
    // first common point is the first λ_s that suits every plant paired with
    // the first λ_u that suits every plant.
    auto first_common = [&](std::size_t count, auto&& feasible) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < count; ++k) {
            bool all = true;
            for (const auto& plant : plants) {
                if (!feasible(plant, k)) {
                    all = false;
                    break;
                }
            }
            if (all) {
                return k;
            }
        }
        return std::nullopt;
    };
    auto stable_ok = [&](const PlantSpec& plant, std::size_t k) {
        try {
            (void)stable_certificate(plant.closed_loop(), grid.s_at(k), opts);
            return true;
        } catch (const Infeasible&) {
            return false;
        } catch (const IllConditioned&) {
            return false;
        }
    };
    auto unstable_ok = [&](const PlantSpec& plant, std::size_t k) {
        try {
            (void)unstable_certificate(plant.open_loop(), grid.u_at(k), opts);
            return true;
        } catch (const Infeasible&) {
            return false;
        } catch (const IllConditioned&) {
            return false;
        }
    };

    auto blocking_plant = [&](std::size_t count, auto&& feasible) {
        for (const auto& plant : plants) {
            bool any = false;
            for (std::size_t k = 0; k < count && !any; ++k) {
                any = feasible(plant, k);
            }
            if (!any) {
                return plant.index;
            }
        }
        for (const auto& plant : plants) {
            if (!feasible(plant, 0)) {
                return plant.index;
            }
        }
        return plants.front().index;
    };

    const auto ks = first_common(grid.s_count(), stable_ok);
    if (!ks) {
        const int who = blocking_plant(grid.s_count(), stable_ok);
        throw NoFeasibleRate(who, "plant " + std::to_string(who) +
                                      ": no stable rate on the grid is certifiable");
    }
    const auto ku = first_common(grid.u_count(), unstable_ok);
    if (!ku) {
        const int who = blocking_plant(grid.u_count(), unstable_ok);
        throw NoFeasibleRate(who, "plant " + std::to_string(who) +
                                      ": no unstable rate on the grid is certifiable");
    }

    CertificateSet set{grid.s_at(*ks), grid.u_at(*ku), {}};
    set.certificates.reserve(plants.size());
    for (const auto& plant : plants) {
        auto cert = certify_plant(plant, set.lambda_s, set.lambda_u, opts);
        if (!cert) {
            throw InternalInconsistency("certify_all: grid point lost feasibility");
        }
        set.certificates.push_back(std::move(*cert));
    }
    return set;
}

namespace {

Matrix riccati_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r_inv,
                        const Matrix& p) {
    Matrix res = a.transpose() * p + p * a + q;
    res -= p * b * r_inv * b.transpose() * p;
    return res;
}

} // namespace

Matrix care_solve(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
    require_square(a, "lqr_gain");
    const std::size_t d = a.rows();
    const std::size_t m = b.cols();
    if (b.rows() != d || q.rows() != d || q.cols() != d || r.rows() != m || r.cols() != m) {
        throw DimensionMismatch("lqr_gain: inconsistent dimensions");
    }
    if (!linalg::is_positive_definite(q) || !linalg::is_positive_definite(r)) {
        throw InvalidArgument("lqr_gain: q and r must be symmetric positive definite");
    }
    const Matrix r_inv = linalg::inverse(r);

    // Bass stabilization: (a+ηI)X + X(a+ηI)ᵀ = 2bbᵀ with -(a+ηI) Hurwitz.
    const double eta = std::max(spectral_abscissa(-a), 0.0) + 1.0;
    const Matrix shifted = a + eta * Matrix::identity(d);
    Matrix x;
    try {
        x = lyap_solve(-shifted.transpose(), 2.0 * (b * b.transpose()));
    } catch (const SingularMatrix&) {
        throw NotStabilizable("lqr_gain: Bass equation is singular");
    }
    if (!linalg::is_positive_definite(x)) {
        throw NotStabilizable("lqr_gain: (a, b) has an uncontrollable mode; no stabilizing "
                              "initial gain");
    }
    Matrix k = b.transpose() * linalg::inverse(x);
    if (!linalg::is_hurwitz(a - b * k)) {
        throw NotStabilizable("lqr_gain: initial gain does not stabilize");
    }

    const double q_scale = std::max(1.0, frobenius_norm(q));
    Matrix p_prev;
    for (int step = 0; step < 50; ++step) {
        const Matrix closed = a - b * k;
        Matrix p = lyap_solve(closed, q + k.transpose() * r * k);
        k = r_inv * b.transpose() * p;
        const bool settled =
            !p_prev.empty() && frobenius_norm(p - p_prev) <= 1e-13 * frobenius_norm(p);
        const double res = frobenius_norm(riccati_residual(a, b, q, r_inv, p));
        if ((settled && res <= 1e-8 * q_scale) || res <= 1e-14 * q_scale) {
            return p;
        }
        p_prev = std::move(p);
    }
    throw NoConvergence("lqr_gain: Newton-Kleinman did not converge in 50 steps");
}

Matrix lqr_gain(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
    const Matrix p = care_solve(a, b, q, r);
    const Matrix k = linalg::inverse(r) * b.transpose() * p;
    if (!linalg::is_hurwitz(a - b * k)) {
        throw InternalInconsistency("lqr_gain: Riccati gain is not stabilizing");
    }
    return k;
}

} // namespace ncs
