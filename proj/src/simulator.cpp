#include "ncs/simulator.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>

namespace ncs {

namespace {

double vec_norm(const Vector& x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return std::sqrt(s);
}

class PropagatorCache {
public:
    PropagatorCache(const Matrix& a_stable, const Matrix& a_unstable)
        : a_s_(a_stable), a_u_(a_unstable) {}

    const Matrix& get(Mode mode, double duration) {
        const auto key = std::make_pair(mode == Mode::stable ? 0 : 1,
                                        std::bit_cast<std::uint64_t>(duration));
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            const Matrix& a = mode == Mode::stable ? a_s_ : a_u_;
            it = cache_.emplace(key, linalg::expm(a, duration)).first;
        }
        return it->second;
    }

private:
    Matrix a_s_;
    Matrix a_u_;
    std::map<std::pair<int, std::uint64_t>, Matrix> cache_;
};

Trajectory simulate_one(const PlantSpec& plant, const PlantCertificate& cert,
                        const ScheduleLogic& schedule, const Vector& x0, double horizon,
                        double sample_dt) {
    Trajectory traj;
    traj.plant = plant.index;
    PropagatorCache props(plant.closed_loop(), plant.open_loop());

    std::vector<double> offsets(schedule.segments.size());
    for (std::size_t j = 0; j < offsets.size(); ++j) {
        offsets[j] = schedule.offset(j);
    }

    auto record = [&](double t, const Vector& x, Mode mode, bool boundary, std::size_t seg) {
        Sample s;
        s.t = t;
        s.x = x;
        s.norm = vec_norm(x);
        s.mode = mode;
        s.v_value = linalg::quadratic_form(cert.mode(mode).p, x);
        s.boundary = boundary;
        s.segment = seg;
        if (!std::isfinite(s.norm) || s.norm > kOverflowNorm) {
            traj.overflow = true;
            traj.diagnostic = "plant " + std::to_string(plant.index) +
                              ": state norm exceeded 1e300 at t=" + std::to_string(t);
            return false;
        }
        traj.samples.push_back(std::move(s));
        return true;
    };

    Vector x = x0;
    const std::size_t nseg = schedule.segments.size();
    for (std::size_t m = 0;; ++m) {
        for (std::size_t j = 0; j < nseg; ++j) {
            const auto& seg = schedule.segments[j];
            const double start = static_cast<double>(m) * schedule.period + offsets[j];
            if (start > horizon) {
                return traj;
            }
            const Mode mode = seg.access_set.contains(plant.index) ? Mode::stable : Mode::unstable;
            if (!record(start, x, mode, true, j)) {
                return traj;
            }
            if (start == horizon) {
                return traj;
            }
            const double next_start = j + 1 < nseg
                                          ? static_cast<double>(m) * schedule.period + offsets[j + 1]
                                          : static_cast<double>(m + 1) * schedule.period;
            const bool cut = next_start > horizon;
            const double end = cut ? horizon : next_start;
            const double duration = cut ? horizon - start : seg.duration;

            // Intra-segment samples by repeated dt steps; the endpoint is
            // propagated in one exact step from the segment start.
            if (sample_dt < duration) {
                const Matrix& step = props.get(mode, sample_dt);
                Vector y = x;
                for (std::size_t k = 1;; ++k) {
                    const double t = start + static_cast<double>(k) * sample_dt;
                    if (t >= end - 1e-12 * std::max(1.0, std::abs(end))) {
                        break;
                    }
                    y = step * y;
                    if (!record(t, y, mode, false, j)) {
                        return traj;
                    }
                }
            }
            x = props.get(mode, duration) * x;
            if (cut) {
                record(horizon, x, mode, false, j);
                return traj;
            }
        }
    }
}

} // namespace

std::vector<Trajectory> simulate(const std::vector<PlantSpec>& plants,
                                 const std::vector<PlantCertificate>& certs,
                                 const ScheduleLogic& schedule, const std::vector<Vector>& x0,
                                 double horizon, double sample_dt) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw InvalidArgument("simulate: horizon must be positive");
    }
    if (!(sample_dt > 0.0) || !std::isfinite(sample_dt)) {
        throw InvalidArgument("simulate: sample_dt must be positive");
    }
    if (plants.size() != certs.size() || plants.size() != x0.size()) {
        throw DimensionMismatch("simulate: plants, certificates and initial states differ in count");
    }
    if (static_cast<int>(plants.size()) != schedule.n_plants) {
        throw DimensionMismatch("simulate: schedule is for " + std::to_string(schedule.n_plants) +
                                " plants, got " + std::to_string(plants.size()));
    }
    std::vector<Trajectory> out;
    out.reserve(plants.size());
    for (std::size_t i = 0; i < plants.size(); ++i) {
        if (x0[i].size() != plants[i].dim()) {
            throw DimensionMismatch("simulate: initial state of plant " +
                                    std::to_string(plants[i].index) + " has dimension " +
                                    std::to_string(x0[i].size()) + ", expected " +
                                    std::to_string(plants[i].dim()));
        }
        out.push_back(simulate_one(plants[i], certs[i], schedule, x0[i], horizon, sample_dt));
    }
    return out;
}

double log_psi_bound(const PlantCertificate& cert, const SwitchStats& stats) {
    return -std::abs(cert.stable.lambda) * stats.d_stable +
           std::abs(cert.unstable.lambda) * stats.d_unstable +
           std::log(cert.mu_su) * static_cast<double>(stats.n_su) +
           std::log(cert.mu_us) * static_cast<double>(stats.n_us);
}

double psi_bound(const PlantCertificate& cert, const SwitchStats& stats) {
    return std::exp(log_psi_bound(cert, stats));
}

double norm_bound_constant(const PlantCertificate& cert) {
    const double top = std::max(linalg::lambda_max(cert.stable.p), linalg::lambda_max(cert.unstable.p));
    const double bottom =
        std::min(linalg::lambda_min(cert.stable.p), linalg::lambda_min(cert.unstable.p));
    return std::sqrt(top / bottom);
}

GasReport gas_report(const Trajectory& traj, const PlantCertificate& cert,
                     const ScheduleLogic& schedule) {
    GasReport rep;
    rep.plant = traj.plant;
    rep.overflow = traj.overflow;
    const SwitchingSignal sig = switching_signal(schedule, traj.plant);
    rep.xi = log_psi_bound(cert, switch_stats(sig, 0.0, schedule.period));
    rep.bound = std::exp(rep.xi);
    rep.c = norm_bound_constant(cert);

    std::vector<double> v_at_period;
    for (const auto& s : traj.samples) {
        if (s.boundary && s.segment == 0) {
            v_at_period.push_back(s.v_value);
        }
    }
    if (v_at_period.size() < 3 && !traj.overflow) {
        throw InsufficientHorizon("plant " + std::to_string(traj.plant) +
                                  ": fewer than two full periods simulated");
    }

    rep.pass = !traj.overflow;
    bool all_zero = !v_at_period.empty();
    for (std::size_t m = 0; m + 1 < v_at_period.size(); ++m) {
        const double before = v_at_period[m];
        const double after = v_at_period[m + 1];
        double ratio;
        if (before == 0.0) {
            ratio = after == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            ratio = after / before;
        }
        if (before != 0.0 || after != 0.0) {
            all_zero = false;
        }
        rep.ratios.push_back(ratio);
        if (m == 0 || ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_period = m;
        }
        if (!(ratio <= rep.bound * (1.0 + kGasRatioSlack))) {
            rep.pass = false;
        }
    }
    rep.trivially_converged = all_zero;
    return rep;
}

} // namespace ncs
