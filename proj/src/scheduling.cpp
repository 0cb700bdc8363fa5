#include "ncs/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncs {

double ScheduleLogic::offset(std::size_t j) const {
    double t = 0.0;
    for (std::size_t k = 0; k < j && k < segments.size(); ++k) {
        t += segments[k].duration;
    }
    return t;
}

ScheduleLogic make_schedule(int n_plants, std::vector<ScheduleSegment> segments) {
    if (segments.size() < 2) {
        throw DegenerateCycle("a schedule needs at least two segments");
    }
    const auto m = segments.front().access_set.size();
    if (!(m > 0 && static_cast<int>(m) < n_plants)) {
        throw InvalidCapacity("schedule access sets must hold M plants with 0 < M < N");
    }
    ScheduleLogic s;
    s.n_plants = n_plants;
    s.capacity = static_cast<int>(m);
    for (std::size_t j = 0; j < segments.size(); ++j) {
        const auto& seg = segments[j];
        const auto& ids = seg.access_set.plants();
        if (ids.size() != m) {
            throw InvalidCapacity("segment " + std::to_string(j) + " grants access to " +
                                  std::to_string(ids.size()) + " plants, expected " +
                                  std::to_string(m));
        }
        if (ids.front() < 1 || ids.back() > n_plants) {
            throw UnknownPlant("segment " + std::to_string(j) + " names a plant outside 1.." +
                               std::to_string(n_plants));
        }
        if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
            throw InvalidArgument("segment " + std::to_string(j) + " has a non-positive duration");
        }
        if (seg.access_set == segments[(j + 1) % segments.size()].access_set) {
            throw DegenerateCycle("segments " + std::to_string(j) + " and its successor repeat " +
                                  seg.access_set.to_string());
        }
        s.period += seg.duration;
    }
    s.segments = std::move(segments);
    return s;
}

ScheduleLogic build_schedule(const CycleDesign& design) {
    if (design.vertices.size() != design.t_factors.size()) {
        throw DimensionMismatch("design has mismatched vertex and T-factor counts");
    }
    int n = static_cast<int>(design.xi_margins.size());
    if (n == 0) {
        for (const auto& v : design.vertices) {
            if (!v.plants().empty()) {
                n = std::max(n, v.plants().back());
            }
        }
    }
    std::vector<ScheduleSegment> segs;
    segs.reserve(design.vertices.size());
    for (std::size_t j = 0; j < design.vertices.size(); ++j) {
        segs.push_back({design.vertices[j], design.t_factors[j]});
    }
    return make_schedule(n, std::move(segs));
}

namespace {

double wrap(double t, double period) {
    double r = std::fmod(t, period);
    if (r < 0.0) {
        r += period;
    }
    return r;
}

} // namespace

std::size_t segment_index_at(const ScheduleLogic& s, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidArgument("gamma_at: time must be finite and non-negative");
    }
    const double r = wrap(t, s.period);
    double end = 0.0;
    for (std::size_t j = 0; j < s.segments.size(); ++j) {
        end += s.segments[j].duration;
        if (r < end) {
            return j;
        }
    }
    // r lands on the accumulated period only through round-off.
    return 0;
}

const VertexLabel& gamma_at(const ScheduleLogic& s, double t) {
    return s.segments[segment_index_at(s, t)].access_set;
}

SwitchingSignal switching_signal(const ScheduleLogic& s, int plant) {
    if (plant < 1 || plant > s.n_plants) {
        throw UnknownPlant("plant " + std::to_string(plant) + " is not in 1.." +
                           std::to_string(s.n_plants));
    }
    SwitchingSignal sig;
    sig.plant = plant;
    sig.period = s.period;
    for (const auto& seg : s.segments) {
        const Mode mode = seg.access_set.contains(plant) ? Mode::stable : Mode::unstable;
        if (!sig.segments.empty() && sig.segments.back().mode == mode) {
            sig.segments.back().duration += seg.duration;
        } else {
            sig.segments.push_back({mode, seg.duration});
        }
    }
    return sig;
}

Mode mode_at(const SwitchingSignal& sig, double t) {
    const double r = wrap(t, sig.period);
    double end = 0.0;
    for (const auto& seg : sig.segments) {
        end += seg.duration;
        if (r < end) {
            return seg.mode;
        }
    }
    return sig.segments.front().mode;
}

namespace {

// Stable time in [0, t).
double stable_time_before(const SwitchingSignal& sig, double t) {
    double per_period = 0.0;
    for (const auto& seg : sig.segments) {
        if (seg.mode == Mode::stable) {
            per_period += seg.duration;
        }
    }
    const double whole = std::floor(t / sig.period);
    const double r = t - whole * sig.period;
    double acc = whole * per_period;
    double start = 0.0;
    for (const auto& seg : sig.segments) {
        if (r <= start) {
            break;
        }
        if (seg.mode == Mode::stable) {
            acc += std::min(seg.duration, r - start);
        }
        start += seg.duration;
    }
    return acc;
}

// Instants m·P + off with from < instant ≤ to.
long count_instants(double off, double period, double from, double to) {
    return static_cast<long>(std::floor((to - off) / period) - std::floor((from - off) / period));
}

} // namespace

SwitchStats switch_stats(const SwitchingSignal& sig, double from, double to) {
    if (!(from >= 0.0) || !(from < to) || !std::isfinite(to)) {
        throw InvalidArgument("switch_stats: need 0 <= from < to");
    }
    SwitchStats st;
    st.d_stable = stable_time_before(sig, to) - stable_time_before(sig, from);
    st.d_stable = std::clamp(st.d_stable, 0.0, to - from);
    st.d_unstable = (to - from) - st.d_stable;

    double off = 0.0;
    const std::size_t k = sig.segments.size();
    for (std::size_t j = 0; j < k; ++j) {
        const Mode prev = sig.segments[(j + k - 1) % k].mode;
        const Mode cur = sig.segments[j].mode;
        if (prev != cur) {
            const long c = count_instants(off, sig.period, from, to);
            if (prev == Mode::stable) {
                st.n_su += c;
            } else {
                st.n_us += c;
            }
        }
        off += sig.segments[j].duration;
    }
    return st;
}

} // namespace ncs
