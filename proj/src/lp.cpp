#include "ncs/lp.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ncs {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kInfeasibleTol = 1e-9;
constexpr double kCheckTol = 1e-9;
constexpr std::size_t kMaxPivots = 200000;

// Dense tableau: `rows` constraint rows of width `cols` + 1, the last entry
// being the right-hand side. basis[i] is the column basic in row i.
struct Tableau {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> t;
    std::vector<std::size_t> basis;
    std::size_t pivots = 0;

    double& at(std::size_t i, std::size_t j) { return t[i * (cols + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return t[i * (cols + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, cols); }
    double rhs(std::size_t i) const { return at(i, cols); }

    void pivot(std::size_t r, std::size_t c) {
        const double inv = 1.0 / at(r, c);
        for (std::size_t j = 0; j <= cols; ++j) {
            at(r, j) *= inv;
        }
        at(r, c) = 1.0;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) {
                continue;
            }
            const double f = at(i, c);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j <= cols; ++j) {
                at(i, j) -= f * at(r, j);
            }
            at(i, c) = 0.0;
        }
        basis[r] = c;
        if (++pivots > kMaxPivots) {
            throw NoConvergence("simplex exceeded the pivot budget");
        }
    }
};

// Minimizes cost over the columns below `usable` (other columns never
// enter). Returns false when the objective is unbounded below.
bool run_simplex(Tableau& tab, const std::vector<double>& cost, std::size_t usable) {
    for (;;) {
        std::size_t enter = usable;
        for (std::size_t j = 0; j < usable; ++j) {
            double reduced = cost[j];
            for (std::size_t i = 0; i < tab.rows; ++i) {
                reduced -= cost[tab.basis[i]] * tab.at(i, j);
            }
            if (reduced < -kCostTol) {
                enter = j;
                break;
            }
        }
        if (enter == usable) {
            return true;
        }
        std::size_t leave = tab.rows;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tab.rows; ++i) {
            const double a = tab.at(i, enter);
            if (a <= kPivotTol) {
                continue;
            }
            const double ratio = tab.rhs(i) / a;
            if (ratio < best - 1e-14 ||
                (ratio <= best + 1e-14 && leave < tab.rows && tab.basis[i] < tab.basis[leave])) {
                if (ratio < best) {
                    best = ratio;
                }
                leave = i;
            }
        }
        if (leave == tab.rows) {
            return false;
        }
        tab.pivot(leave, enter);
    }
}

} // namespace

void LpProblem::validate() const {
    const std::size_t n = objective.size();
    if (n == 0) {
        throw InvalidArgument("lp: no variables");
    }
    if (rhs.size() != rows.size()) {
        throw DimensionMismatch("lp: rhs length differs from row count");
    }
    if (lower.size() != n) {
        throw DimensionMismatch("lp: lower-bound length differs from variable count");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    for (double v : objective) {
        if (!finite(v)) {
            throw InvalidArgument("lp: non-finite objective coefficient");
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != n) {
            throw DimensionMismatch("lp: row " + std::to_string(i) + " has the wrong width");
        }
        for (double v : rows[i]) {
            if (!finite(v)) {
                throw InvalidArgument("lp: non-finite coefficient in row " + std::to_string(i));
            }
        }
        if (!finite(rhs[i])) {
            throw InvalidArgument("lp: non-finite rhs in row " + std::to_string(i));
        }
    }
    for (double v : lower) {
        if (!finite(v)) {
            throw InvalidArgument("lp: non-finite lower bound");
        }
    }
}

LpResult lp_feasible(const LpProblem& problem) {
    problem.validate();
    const std::size_t n = problem.n_vars();
    const std::size_t m = problem.n_rows();

    // Shift x = lower + y so that y ≥ 0, then flip rows with negative rhs so
    // the initial basis is slack or artificial.
    std::vector<double> b(m);
    std::vector<bool> needs_art(m, false);
    std::size_t n_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double s = problem.rhs[i];
        for (std::size_t j = 0; j < n; ++j) {
            s -= problem.rows[i][j] * problem.lower[j];
        }
        b[i] = s;
        if (s < 0.0) {
            needs_art[i] = true;
            ++n_art;
        }
    }

    Tableau tab;
    tab.rows = m;
    tab.cols = n + m + n_art;
    tab.t.assign(m * (tab.cols + 1), 0.0);
    tab.basis.assign(m, 0);
    std::size_t art = n + m;
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = needs_art[i] ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            tab.at(i, j) = sign * problem.rows[i][j];
        }
        tab.at(i, n + i) = sign;
        tab.rhs(i) = sign * b[i];
        if (needs_art[i]) {
            tab.at(i, art) = 1.0;
            tab.basis[i] = art++;
        } else {
            tab.basis[i] = n + i;
        }
    }

    LpResult result;
    if (n_art > 0) {
        std::vector<double> cost1(tab.cols, 0.0);
        for (std::size_t j = n + m; j < tab.cols; ++j) {
            cost1[j] = 1.0;
        }
        run_simplex(tab, cost1, tab.cols);
        double residual = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis[i] >= n + m) {
                residual += tab.rhs(i);
            }
        }
        result.phase1_residual = residual;
        if (residual > kInfeasibleTol) {
            result.status = LpStatus::infeasible;
            result.pivots = tab.pivots;
            return result;
        }
        // Drive zero-level artificials out of the basis where possible; rows
        // with no usable pivot are redundant and keep their artificial at 0.
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis[i] < n + m) {
                continue;
            }
            for (std::size_t j = 0; j < n + m; ++j) {
                if (std::abs(tab.at(i, j)) > kPivotTol) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
    }

    std::vector<double> cost2(tab.cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cost2[j] = problem.objective[j];
    }
    if (!run_simplex(tab, cost2, n + m)) {
        throw Unbounded("lp: objective is unbounded below");
    }

    std::vector<double> y(tab.cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        y[tab.basis[i]] = tab.rhs(i);
    }
    result.x.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        result.x[j] = problem.lower[j] + std::max(y[j], 0.0);
    }
    for (std::size_t i = 0; i < m; ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            lhs += problem.rows[i][j] * result.x[j];
        }
        if (lhs > problem.rhs[i] + kCheckTol) {
            throw InternalInconsistency("lp: solution violates row " + std::to_string(i) +
                                        " by " + std::to_string(lhs - problem.rhs[i]));
        }
    }
    result.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        result.objective += problem.objective[j] * result.x[j];
    }
    result.status = LpStatus::optimal;
    result.pivots = tab.pivots;
    return result;
}

} // namespace ncs
