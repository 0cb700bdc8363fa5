#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ncs/certificates.hpp"
#include "ncs/graph.hpp"
#include "ncs/lp.hpp"

namespace ncs {

/// A cycle on the NCS graph with its dwell durations and achieved Ξ values.
struct CycleDesign {
    Cycle vertices;
    std::vector<double> t_factors;
    WeightVector xi_margins;

    [[nodiscard]] double period() const;
};

class CapacityInvalid : public Error {
public:
    using Error::Error;
};

class NotCandidateContractive : public Error {
public:
    NotCandidateContractive(int plant, const std::string& what) : Error(what), plant_(plant) {}
    [[nodiscard]] int plant() const noexcept { return plant_; }

private:
    int plant_;
};

class SearchExhausted : public Error {
public:
    using Error::Error;
};

/// True when every plant 1..n is closed loop in at least one vertex.
[[nodiscard]] bool is_candidate_contractive(int n, const Cycle& cycle);

/// Rotates a simple cycle so that its lexicographically smallest vertex
/// comes first.
[[nodiscard]] Cycle canonical_rotation(const Cycle& cycle);

/**
 * Lazily yields simple candidate-contractive cycles over the M-subsets of
 * {1..N}. The greedy set-cover cycle comes first; afterwards cycles are
 * enumerated by increasing length and, within a length, lexicographically
 * by their canonical rotation. Each cycle appears once up to rotation.
 */
class CoveringCycleStream {
public:
    CoveringCycleStream(int n, int m, std::size_t max_count, std::size_t max_len);

    [[nodiscard]] std::optional<Cycle> next();
    [[nodiscard]] std::size_t yielded() const noexcept { return yielded_; }
    [[nodiscard]] const Cycle& greedy() const noexcept { return greedy_; }

private:
    bool advance();
    bool fill(std::size_t depth, const std::vector<int>* after);
    bool search_subset(std::vector<int>& out, const std::vector<int>* bound,
                       std::size_t depth) const;
    void push_vertex(const std::vector<int>& subset);
    void pop_vertex();

    int n_;
    int m_;
    std::size_t max_count_;
    std::size_t max_len_;
    std::size_t yielded_ = 0;
    bool greedy_done_ = false;
    bool exhausted_ = false;
    Cycle greedy_;

    std::size_t len_ = 0;                // current enumeration length
    std::vector<std::vector<int>> path_;
    std::vector<int> cover_;             // per plant: path vertices containing it
    int uncovered_ = 0;
};

[[nodiscard]] std::vector<Cycle> covering_cycles(int n, int m, std::size_t max_count,
                                                 std::size_t max_len);

struct SearchBudget {
    std::size_t max_cycle_len = 12;
    std::size_t max_cycles = 64;
    double delta = 1e-6;
    double t_min = 1e-3;

    void validate() const;
};

/// Builds the T-factor LP: for each plant i, Σ_j w̄_i(v_j)·T_j ≤ -E_i - δ
/// with E_i the cycle's edge total; T_j ≥ t_min; minimize Σ T_j.
[[nodiscard]] LpProblem t_factor_lp(const NcsGraph& g, const Cycle& cycle, double delta,
                                    double t_min);

/// T-factors making every Ξ_i ≤ -δ, or nullopt when the LP is infeasible.
[[nodiscard]] std::optional<CycleDesign> t_contractive_factors(const NcsGraph& g,
                                                               const Cycle& cycle,
                                                               double delta = 1e-6,
                                                               double t_min = 1e-3);

struct SearchStats {
    std::size_t grid_points_visited = 0;
    std::size_t grid_points_certified = 0;
    std::size_t grid_points_pruned = 0; ///< certified but provably without a T-contractive cycle
    std::size_t lps_solved = 0;
    std::size_t cycles_available = 0;
};

struct Design {
    CycleDesign cycle;
    CertificateSet certificates;
    SearchStats stats;
};

/// Couples the rate grid with cycle search and returns the first
/// T-contractive design in loop order. Throws SearchExhausted otherwise.
[[nodiscard]] Design design_cycle(const std::vector<PlantSpec>& plants, int m,
                                  const LambdaGrid& grid, const SearchBudget& budget,
                                  CertificateOptions opts = {});

} // namespace ncs
