#pragma once

#include <cstddef>
#include <vector>

#include "ncs/certificates.hpp"
#include "ncs/cycle_search.hpp"
#include "ncs/graph.hpp"

namespace ncs {

struct ScheduleSegment {
    VertexLabel access_set;
    double duration = 0.0;
};

/// Periodic scheduling logic γ. Segments are right-open: γ(t) = s_j on
/// [τ_j, τ_{j+1}).
struct ScheduleLogic {
    int n_plants = 0;
    int capacity = 0;
    std::vector<ScheduleSegment> segments;
    double period = 0.0;

    /// Offset of segment j's start within one period.
    [[nodiscard]] double offset(std::size_t j) const;
};

class UnknownPlant : public Error {
public:
    using Error::Error;
};

/// Validates the segment list (M-subsets of {1..n}, positive durations,
/// distinct neighbours including the wrap) and computes the period.
[[nodiscard]] ScheduleLogic make_schedule(int n_plants, std::vector<ScheduleSegment> segments);

/// Segment j holds the closed-loop set of v_j for T_{v_j}.
[[nodiscard]] ScheduleLogic build_schedule(const CycleDesign& design);

[[nodiscard]] std::size_t segment_index_at(const ScheduleLogic& s, double t);
[[nodiscard]] const VertexLabel& gamma_at(const ScheduleLogic& s, double t);

struct ModeSegment {
    Mode mode = Mode::stable;
    double duration = 0.0;
};

/// σ_i over one period, adjacent same-mode segments merged (not across the
/// period boundary).
struct SwitchingSignal {
    int plant = 0;
    std::vector<ModeSegment> segments;
    double period = 0.0;
};

[[nodiscard]] SwitchingSignal switching_signal(const ScheduleLogic& s, int plant);
[[nodiscard]] Mode mode_at(const SwitchingSignal& sig, double t);

/// Activation times and transition counts over the half-open interval
/// (from, to].
struct SwitchStats {
    double d_stable = 0.0;
    double d_unstable = 0.0;
    long n_su = 0;
    long n_us = 0;
};

[[nodiscard]] SwitchStats switch_stats(const SwitchingSignal& sig, double from, double to);

} // namespace ncs
