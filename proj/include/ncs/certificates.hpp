#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ncs/error.hpp"
#include "ncs/linalg.hpp"

namespace ncs {

using linalg::Matrix;

/// A controlled plant ẋ = A x + B u with state feedback u = K x.
struct PlantSpec {
    int index = 0; ///< 1-based plant id
    Matrix a;
    Matrix b;
    Matrix k;

    [[nodiscard]] std::size_t dim() const noexcept { return a.rows(); }
    [[nodiscard]] Matrix closed_loop() const { return a + b * k; }
    [[nodiscard]] const Matrix& open_loop() const noexcept { return a; }
};

/// Raised when input data breaks the standing assumptions (capacity,
/// Hurwitz closed loop, unstable open loop).
class AssumptionViolated : public Error {
public:
    AssumptionViolated(int plant, const std::string& what)
        : Error(what), plant_(plant) {}
    [[nodiscard]] int plant() const noexcept { return plant_; }

private:
    int plant_;
};

/// Checks dimensions and that A + B·K is Hurwitz.
[[nodiscard]] PlantSpec make_plant(int index, Matrix a, Matrix b, Matrix k);

/// Additionally requires every open-loop matrix to be unstable (not Hurwitz).
void check_open_loop_unstable(const std::vector<PlantSpec>& plants);

enum class Mode { stable, unstable };

[[nodiscard]] constexpr const char* to_string(Mode m) noexcept {
    return m == Mode::stable ? "stable" : "unstable";
}

/// Quadratic certificate V(ξ) = ξᵀPξ with AᵀP + PA ⪯ -λP, normalized so
/// that λ_max(P) = 1. kappa_eff = λ_min(P).
struct ModeCertificate {
    Mode mode = Mode::stable;
    Matrix p;
    double lambda = 0.0;
    double kappa_eff = 0.0;
};

struct PlantCertificate {
    int plant = 0;
    ModeCertificate stable;
    ModeCertificate unstable;
    double mu_su = 1.0; ///< V_u ≤ mu_su · V_s
    double mu_us = 1.0; ///< V_s ≤ mu_us · V_u

    [[nodiscard]] const ModeCertificate& mode(Mode m) const noexcept {
        return m == Mode::stable ? stable : unstable;
    }
};

/// The requested rate lies outside the feasible set. bound() is the
/// feasibility frontier: the supremum decay rate for a stable mode, or the
/// (negative) infimum growth rate magnitude for an unstable mode.
class Infeasible : public Error {
public:
    Infeasible(double bound, const std::string& what) : Error(what), bound_(bound) {}
    [[nodiscard]] double bound() const noexcept { return bound_; }

private:
    double bound_;
};

/// The certificate exists but λ_min(P) is below the configured floor.
class IllConditioned : public Error {
public:
    IllConditioned(double kappa_eff, const std::string& what)
        : Error(what), kappa_eff_(kappa_eff) {}
    [[nodiscard]] double kappa_eff() const noexcept { return kappa_eff_; }

private:
    double kappa_eff_;
};

class NotStabilizable : public Error {
public:
    using Error::Error;
};

class NoFeasibleRate : public Error {
public:
    NoFeasibleRate(int plant, const std::string& what) : Error(what), plant_(plant) {}
    [[nodiscard]] int plant() const noexcept { return plant_; }

private:
    int plant_;
};

/// Rate line-search grid. λ_s runs over s_min + k·h_s ≤ s_max and λ_u over
/// u_min + k·h_u ≤ u_max, both ascending; u_max ≤ 0.
struct LambdaGrid {
    double s_min = 0.1;
    double s_max = 1.0;
    double h_s = 0.01;
    double u_min = -20.0;
    double u_max = 0.0;
    double h_u = 0.01;

    void validate() const;
    [[nodiscard]] std::size_t s_count() const;
    [[nodiscard]] std::size_t u_count() const;
    [[nodiscard]] double s_at(std::size_t k) const noexcept { return s_min + static_cast<double>(k) * h_s; }
    [[nodiscard]] double u_at(std::size_t k) const noexcept { return u_min + static_cast<double>(k) * h_u; }
};

struct CertificateOptions {
    double kappa_floor = 0.0;
};

/// Feasible iff λ < -2·abscissa(a_s). P solves the Lyapunov equation for
/// a_s + (λ/2)I with Q = I.
[[nodiscard]] ModeCertificate stable_certificate(const Matrix& a_s, double lambda,
                                                 CertificateOptions opts = {});

/// λ ≤ 0. Feasible iff |λ| > 2·abscissa(a_u), i.e. a_u + (λ/2)I Hurwitz.
[[nodiscard]] ModeCertificate unstable_certificate(const Matrix& a_u, double lambda,
                                                   CertificateOptions opts = {});

/// λ_max(p_to · p_from⁻¹), the smallest μ with ξᵀp_to ξ ≤ μ·ξᵀp_from ξ.
[[nodiscard]] double jump_factor(const Matrix& p_from, const Matrix& p_to);

namespace detail {
/// λ_max(p_to · p_from⁻¹) without the μ ≥ 1 sanity check.
[[nodiscard]] double generalized_lambda_max(const Matrix& p_from, const Matrix& p_to);
} // namespace detail

/// Certificates for one plant at a fixed rate pair, or nullopt when either
/// mode is infeasible or ill-conditioned at that pair.
[[nodiscard]] std::optional<PlantCertificate> certify_plant(const PlantSpec& plant, double lambda_s,
                                                            double lambda_u,
                                                            CertificateOptions opts = {});

struct CertificateSet {
    double lambda_s = 0.0;
    double lambda_u = 0.0;
    std::vector<PlantCertificate> certificates;
};

/// First grid point, in line-search order (λ_s outer, λ_u inner, both
/// ascending), at which every plant is certifiable with the shared rates.
/// Throws NoFeasibleRate naming the first plant that blocks every point.
[[nodiscard]] CertificateSet certify_all(const std::vector<PlantSpec>& plants,
                                         const LambdaGrid& grid, CertificateOptions opts = {});

/// Continuous-time LQR gain K = R⁻¹BᵀP (closed loop a - b·K) by
/// Newton-Kleinman iteration from a Bass stabilizing gain.
[[nodiscard]] Matrix lqr_gain(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r);

/// Riccati solution that accompanies lqr_gain (exposed for tests).
[[nodiscard]] Matrix care_solve(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r);

} // namespace ncs
