#pragma once

#include <cstddef>
#include <vector>

#include "ncs/error.hpp"

namespace ncs {

/// minimize cᵀx subject to rows·x ≤ rhs and x ≥ lower.
struct LpProblem {
    std::vector<double> objective;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<double> lower;

    [[nodiscard]] std::size_t n_vars() const noexcept { return objective.size(); }
    [[nodiscard]] std::size_t n_rows() const noexcept { return rows.size(); }
    void validate() const;
};

enum class LpStatus { optimal, infeasible };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective = 0.0;
    double phase1_residual = 0.0; ///< artificial sum left after phase 1
    std::size_t pivots = 0;

    [[nodiscard]] bool feasible() const noexcept { return status == LpStatus::optimal; }
};

class Unbounded : public Error {
public:
    using Error::Error;
};

/// Two-phase dense simplex with Bland's rule. Infeasible when the phase-1
/// optimum exceeds 1e-9; the returned point satisfies every constraint to
/// 1e-9 absolute.
[[nodiscard]] LpResult lp_feasible(const LpProblem& problem);

} // namespace ncs
