#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncs/cli/config.hpp"
#include "ncs/cycle_search.hpp"
#include "ncs/scheduling.hpp"
#include "ncs/simulator.hpp"

namespace ncs::cli {

/// PCG XSL-RR 128/64 ("pcg64").
class Pcg64 {
public:
    explicit Pcg64(std::uint64_t seed, std::uint64_t stream = 0xda3e39cb94b95bdbULL);

    std::uint64_t next();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    void step() { state_ = state_ * kMultiplier + inc_; }

    static constexpr unsigned __int128 kMultiplier =
        (static_cast<unsigned __int128>(0x2360ED051FC65DA4ULL) << 64) | 0x4385DF649FCCF645ULL;
    unsigned __int128 state_ = 0;
    unsigned __int128 inc_ = 0;
};

/// Everything `design` produces and `simulate`/`report` consume.
struct ScheduleArtifact {
    int n_plants = 0;
    int capacity = 0;
    CycleDesign design;
    CertificateSet certificates;
    SearchStats stats;
    std::optional<double> reference_period;
};

[[nodiscard]] Json certificate_to_json(const PlantCertificate& c);
[[nodiscard]] PlantCertificate certificate_from_json(const Json& j, const std::string& field);

[[nodiscard]] Json schedule_to_json(const ScheduleArtifact& a);
[[nodiscard]] ScheduleArtifact schedule_from_json(const Json& j);
[[nodiscard]] ScheduleArtifact load_schedule(const std::string& path);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& contents);

struct CsvRow {
    int run_id = 0;
    int plant = 0;
    double t = 0.0;
    Mode mode = Mode::stable;
    double norm_x = 0.0;
    double v_value = 0.0;
};

inline constexpr const char* kTrajectoryHeader = "run_id,plant,t,mode,norm_x,v_value";

[[nodiscard]] std::string format_double(double v);
void append_csv_rows(std::string& out, int run_id, const Trajectory& traj);
[[nodiscard]] std::vector<CsvRow> read_trajectories_csv(const std::string& path);

} // namespace ncs::cli
