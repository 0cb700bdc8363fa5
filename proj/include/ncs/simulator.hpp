#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ncs/certificates.hpp"
#include "ncs/scheduling.hpp"

namespace ncs {

using linalg::Vector;

struct Sample {
    double t = 0.0;
    Vector x;
    double norm = 0.0;
    double v_value = 0.0;   ///< xᵀP_σ(t)x with the mode active at t
    Mode mode = Mode::stable;
    bool boundary = false;  ///< t is a schedule switching instant
    std::size_t segment = 0; ///< schedule segment active at t
};

struct Trajectory {
    int plant = 0;
    std::vector<Sample> samples;
    bool overflow = false;
    std::string diagnostic;
};

class InsufficientHorizon : public Error {
public:
    using Error::Error;
};

/// Threshold above which a state norm is treated as divergent.
inline constexpr double kOverflowNorm = 1e300;

/**
 * Exact piecewise-LTI propagation of every plant under the schedule: each
 * segment applies expm of the closed-loop or open-loop matrix. Samples are
 * taken every sample_dt inside a segment and at every switching instant.
 * Divergence stops the plant's run and is recorded in its diagnostic.
 */
[[nodiscard]] std::vector<Trajectory> simulate(const std::vector<PlantSpec>& plants,
                                               const std::vector<PlantCertificate>& certs,
                                               const ScheduleLogic& schedule,
                                               const std::vector<Vector>& x0, double horizon,
                                               double sample_dt);

/// exp(-|λ_s|·D_s + |λ_u|·D_u + ln μ_su·N_su + ln μ_us·N_us).
[[nodiscard]] double psi_bound(const PlantCertificate& cert, const SwitchStats& stats);
[[nodiscard]] double log_psi_bound(const PlantCertificate& cert, const SwitchStats& stats);

struct GasReport {
    int plant = 0;
    std::vector<double> ratios;   ///< V at period m+1 over V at period m
    double xi = 0.0;              ///< log of the per-period bound
    double bound = 0.0;           ///< exp(xi)
    double c = 0.0;               ///< norm-bound constant
    bool trivially_converged = false;
    bool overflow = false;
    bool pass = false;
    std::size_t worst_period = 0;
    double worst_ratio = 0.0;
};

/// Relative slack allowed on each per-period ratio.
inline constexpr double kGasRatioSlack = 1e-6;

[[nodiscard]] GasReport gas_report(const Trajectory& traj, const PlantCertificate& cert,
                                   const ScheduleLogic& schedule);

/// sqrt(max_p λ_max(P_p) / min_p λ_min(P_p)).
[[nodiscard]] double norm_bound_constant(const PlantCertificate& cert);

} // namespace ncs
