#include "ncs/cycle_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ncs {

double CycleDesign::period() const {
    return std::accumulate(t_factors.begin(), t_factors.end(), 0.0);
}

bool is_candidate_contractive(int n, const Cycle& cycle) {
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (const auto& v : cycle) {
        for (int id : v.plants()) {
            if (id >= 1 && id <= n) {
                seen[static_cast<std::size_t>(id)] = true;
            }
        }
    }
    return std::all_of(seen.begin() + 1, seen.end(), [](bool b) { return b; });
}

Cycle canonical_rotation(const Cycle& cycle) {
    if (cycle.empty()) {
        return cycle;
    }
    const auto first = std::min_element(cycle.begin(), cycle.end());
    Cycle out;
    out.reserve(cycle.size());
    out.insert(out.end(), first, cycle.end());
    out.insert(out.end(), cycle.begin(), first);
    return out;
}

// ---------------------------------------------------------------------------
// CoveringCycleStream

namespace {

std::size_t ceil_div(int a, int b) {
    return static_cast<std::size_t>((a + b - 1) / b);
}

// Number of M-subsets, saturated at `cap`.
std::size_t subset_count_capped(int n, int m, std::size_t cap) {
    const auto count = vertex_count(n, m);
    if (count > cap) {
        return cap;
    }
    return count.convert_to<std::size_t>();
}

} // namespace

CoveringCycleStream::CoveringCycleStream(int n, int m, std::size_t max_count, std::size_t max_len)
    : n_(n), m_(m), max_count_(max_count), max_len_(max_len) {
    if (!(m > 0 && m < n)) {
        throw CapacityInvalid("capacity M=" + std::to_string(m) + " must satisfy 0 < M < N=" +
                              std::to_string(n));
    }
    const std::size_t shortest = std::max<std::size_t>(2, ceil_div(n, m));
    if (shortest > max_len) {
        throw CapacityInvalid("covering needs at least " + std::to_string(shortest) +
                              " vertices but max_len is " + std::to_string(max_len));
    }
    max_len_ = std::min(max_len, subset_count_capped(n, m, max_len));

    // Greedy cover: each step takes the lexicographically smallest M-subset
    // covering the most uncovered plants.
    std::vector<bool> covered(static_cast<std::size_t>(n) + 1, false);
    int left = n;
    while (left > 0) {
        std::vector<int> pick;
        for (int id = 1; id <= n && static_cast<int>(pick.size()) < m; ++id) {
            if (!covered[static_cast<std::size_t>(id)]) {
                pick.push_back(id);
            }
        }
        for (int id = 1; id <= n && static_cast<int>(pick.size()) < m; ++id) {
            if (covered[static_cast<std::size_t>(id)]) {
                pick.push_back(id);
            }
        }
        for (int id : pick) {
            if (!covered[static_cast<std::size_t>(id)]) {
                covered[static_cast<std::size_t>(id)] = true;
                --left;
            }
        }
        greedy_.emplace_back(std::move(pick));
    }
    if (greedy_.size() < 2) {
        // Only reachable when N ≤ M, which the capacity check excludes.
        throw CapacityInvalid("greedy cover degenerated to a single vertex");
    }
    greedy_ = canonical_rotation(greedy_);

    len_ = shortest;
    cover_.assign(static_cast<std::size_t>(n) + 1, 0);
    uncovered_ = n;
}

void CoveringCycleStream::push_vertex(const std::vector<int>& subset) {
    for (int id : subset) {
        if (cover_[static_cast<std::size_t>(id)]++ == 0) {
            --uncovered_;
        }
    }
    path_.push_back(subset);
}

void CoveringCycleStream::pop_vertex() {
    for (int id : path_.back()) {
        if (--cover_[static_cast<std::size_t>(id)] == 0) {
            ++uncovered_;
        }
    }
    path_.pop_back();
}

bool CoveringCycleStream::search_subset(std::vector<int>& out, const std::vector<int>* bound,
                                        std::size_t depth) const {
    const std::size_t m = static_cast<std::size_t>(m_);
    const long remaining_after = static_cast<long>(len_) - static_cast<long>(depth) - 1;
    const long need = std::max<long>(0, uncovered_ - remaining_after * m_);

    // suffix[e] = number of uncovered plants with id ≥ e.
    std::vector<int> suffix(static_cast<std::size_t>(n_) + 2, 0);
    for (int e = n_; e >= 1; --e) {
        suffix[static_cast<std::size_t>(e)] =
            suffix[static_cast<std::size_t>(e) + 1] + (cover_[static_cast<std::size_t>(e)] == 0 ? 1 : 0);
    }

    std::vector<int> cur(m, 0);
    // Depth-first over positions; `tight` means cur[0..pos) equals bound's
    // prefix, in which case the completed tuple must exceed the bound.
    auto rec = [&](auto&& self, std::size_t pos, bool tight, long fresh) -> bool {
        if (pos == m) {
            if (tight) {
                return false;
            }
            if (fresh < need) {
                return false;
            }
            for (const auto& v : path_) {
                if (v == cur) {
                    return false;
                }
            }
            out = cur;
            return true;
        }
        const int lo_free = pos == 0 ? 1 : cur[pos - 1] + 1;
        const int lo = tight ? std::max(lo_free, (*bound)[pos]) : lo_free;
        const int hi = n_ - static_cast<int>(m - pos - 1);
        for (int e = lo; e <= hi; ++e) {
            const long slots = static_cast<long>(m - pos - 1);
            if (fresh + std::min<long>(slots + 1, suffix[static_cast<std::size_t>(e)]) < need) {
                break; // monotone in e
            }
            const long add = cover_[static_cast<std::size_t>(e)] == 0 ? 1 : 0;
            const long reachable = std::min<long>(slots, suffix[static_cast<std::size_t>(e) + 1]);
            if (fresh + add + reachable < need) {
                continue;
            }
            cur[pos] = e;
            const bool still_tight = tight && e == (*bound)[pos];
            if (self(self, pos + 1, still_tight, fresh + add)) {
                return true;
            }
        }
        return false;
    };
    return rec(rec, 0, bound != nullptr, 0);
}

bool CoveringCycleStream::fill(std::size_t depth, const std::vector<int>* after) {
    // Candidate at `depth` must exceed both `after` and, past the first slot,
    // the cycle's first vertex (which is the smallest by construction).
    const std::vector<int>* bound = after;
    if (depth > 0) {
        const auto& v0 = path_.front();
        if (bound == nullptr || *bound < v0) {
            bound = &v0;
        }
    }
    std::vector<int> pick;
    if (!search_subset(pick, bound, depth)) {
        return false;
    }
    push_vertex(pick);
    return true;
}

bool CoveringCycleStream::advance() {
    std::size_t depth;
    if (path_.size() == len_) {
        depth = len_ - 1;
    } else {
        path_.clear();
        std::fill(cover_.begin(), cover_.end(), 0);
        uncovered_ = n_;
        depth = 0;
    }
    for (;;) {
        bool ok;
        if (path_.size() > depth) {
            const std::vector<int> prev = path_.back();
            pop_vertex();
            ok = fill(depth, &prev);
        } else {
            ok = fill(depth, nullptr);
        }
        if (ok) {
            if (path_.size() == len_) {
                return true;
            }
            ++depth;
            continue;
        }
        if (depth == 0) {
            return false;
        }
        --depth;
    }
}

std::optional<Cycle> CoveringCycleStream::next() {
    if (yielded_ >= max_count_) {
        return std::nullopt;
    }
    if (!greedy_done_) {
        greedy_done_ = true;
        ++yielded_;
        return greedy_;
    }
    while (!exhausted_) {
        if (advance()) {
            Cycle c;
            c.reserve(path_.size());
            for (const auto& v : path_) {
                c.emplace_back(v);
            }
            if (c == greedy_) {
                continue;
            }
            ++yielded_;
            return c;
        }
        path_.clear();
        if (len_ >= max_len_) {
            exhausted_ = true;
            break;
        }
        ++len_;
    }
    return std::nullopt;
}

std::vector<Cycle> covering_cycles(int n, int m, std::size_t max_count, std::size_t max_len) {
    CoveringCycleStream stream(n, m, max_count, max_len);
    std::vector<Cycle> out;
    while (auto c = stream.next()) {
        out.push_back(std::move(*c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// T-factor LP

void SearchBudget::validate() const {
    if (max_cycle_len < 2) {
        throw InvalidArgument("search.max_cycle_len must be at least 2");
    }
    if (max_cycles == 0) {
        throw InvalidArgument("search.max_cycles must be positive");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw InvalidArgument("search.delta must be positive");
    }
    if (!(t_min > 0.0) || !std::isfinite(t_min)) {
        throw InvalidArgument("search.t_min must be positive");
    }
}

LpProblem t_factor_lp(const NcsGraph& g, const Cycle& cycle, double delta, double t_min) {
    const XiParts parts = g.xi_parts(cycle);
    const auto n = static_cast<std::size_t>(g.n_plants());
    const std::size_t len = cycle.size();
    LpProblem lp;
    lp.objective.assign(len, 1.0);
    lp.lower.assign(len, t_min);
    lp.rows.assign(n, std::vector<double>(len, 0.0));
    lp.rhs.assign(n, 0.0);
    for (std::size_t j = 0; j < len; ++j) {
        const auto w = g.vertex_weight(cycle[j]);
        for (std::size_t i = 0; i < n; ++i) {
            lp.rows[i][j] = w[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        lp.rhs[i] = -parts.edge_part[i] - delta;
    }
    return lp;
}

std::optional<CycleDesign> t_contractive_factors(const NcsGraph& g, const Cycle& cycle,
                                                 double delta, double t_min) {
    check_cycle_shape(cycle);
    for (int i = 1; i <= g.n_plants(); ++i) {
        const bool ever = std::any_of(cycle.begin(), cycle.end(),
                                      [i](const VertexLabel& v) { return v.contains(i); });
        if (!ever) {
            throw NotCandidateContractive(i, "plant " + std::to_string(i) +
                                                 " is never closed loop in the cycle");
        }
    }
    const LpProblem lp = t_factor_lp(g, cycle, delta, t_min);
    const LpResult res = lp_feasible(lp);
    if (!res.feasible()) {
        return std::nullopt;
    }

    CycleDesign design{cycle, res.x, g.xi(cycle, res.x)};
    const auto worst = *std::max_element(design.xi_margins.begin(), design.xi_margins.end());
    if (worst > -delta) {
        // Round-off left a margin short of δ; stretch T uniformly, which
        // scales the (negative) vertex part and leaves edges fixed.
        const XiParts parts = g.xi_parts(cycle);
        double alpha = 1.0;
        for (std::size_t i = 0; i < parts.edge_part.size(); ++i) {
            double v = 0.0;
            for (std::size_t j = 0; j < cycle.size(); ++j) {
                v += lp.rows[i][j] * design.t_factors[j];
            }
            if (!(v < 0.0)) {
                throw InternalInconsistency("LP solution leaves a plant without net decay");
            }
            alpha = std::max(alpha, (parts.edge_part[i] + delta) / -v);
        }
        for (double& t : design.t_factors) {
            t *= alpha;
        }
        design.xi_margins = g.xi(cycle, design.t_factors);
        for (double x : design.xi_margins) {
            if (!(x < 0.0)) {
                throw InternalInconsistency("T-factor polish failed to reach a negative margin");
            }
        }
    }
    return design;
}

// ---------------------------------------------------------------------------
// Rate-grid driver

namespace {

using ModeRow = std::optional<std::vector<ModeCertificate>>;

// Certificates for every plant at one rate, or nullopt when any plant is
// infeasible or ill-conditioned there.
template <class Make>
ModeRow certify_row(const std::vector<PlantSpec>& plants, Make&& make) {
    std::vector<ModeCertificate> row;
    row.reserve(plants.size());
    try {
        for (const auto& p : plants) {
            row.push_back(make(p));
        }
    } catch (const Infeasible&) {
        return std::nullopt;
    } catch (const IllConditioned&) {
        return std::nullopt;
    }
    return row;
}

} // namespace

Design design_cycle(const std::vector<PlantSpec>& plants, int m, const LambdaGrid& grid,
                    const SearchBudget& budget, CertificateOptions opts) {
    grid.validate();
    budget.validate();
    const int n = static_cast<int>(plants.size());
    if (!(m > 0 && m < n)) {
        throw InvalidCapacity("capacity M=" + std::to_string(m) + " must satisfy 0 < M < N=" +
                              std::to_string(n));
    }
    for (const auto& p : plants) {
        if (!linalg::is_hurwitz(p.closed_loop())) {
            throw AssumptionViolated(p.index, "plant " + std::to_string(p.index) +
                                                  ": closed loop A+BK is not Hurwitz");
        }
    }
    check_open_loop_unstable(plants);

    const std::vector<Cycle> cycles = covering_cycles(n, m, budget.max_cycles, budget.max_cycle_len);

    // Feasibility frontiers shared by all plants.
    double s_sup = std::numeric_limits<double>::infinity();
    double u_sup = std::numeric_limits<double>::infinity();
    for (const auto& p : plants) {
        s_sup = std::min(s_sup, -2.0 * linalg::spectral_abscissa(p.closed_loop()));
        u_sup = std::min(u_sup, -2.0 * linalg::spectral_abscissa(p.open_loop()));
    }

    SearchStats stats;
    stats.cycles_available = cycles.size();
    std::vector<std::optional<ModeRow>> u_cache(grid.u_count());

    for (std::size_t ks = 0; ks < grid.s_count(); ++ks) {
        const double ls = grid.s_at(ks);
        if (!(ls < s_sup)) {
            stats.grid_points_visited += grid.u_count();
            continue;
        }
        const ModeRow s_row = certify_row(plants, [&](const PlantSpec& p) {
            return stable_certificate(p.closed_loop(), ls, opts);
        });
        if (!s_row) {
            stats.grid_points_visited += grid.u_count();
            continue;
        }
        for (std::size_t ku = 0; ku < grid.u_count(); ++ku) {
            ++stats.grid_points_visited;
            const double lu = grid.u_at(ku);
            if (!(lu < u_sup)) {
                continue;
            }
            if (!u_cache[ku]) {
                u_cache[ku] = certify_row(plants, [&](const PlantSpec& p) {
                    return unstable_certificate(p.open_loop(), lu, opts);
                });
            }
            const ModeRow& u_row = *u_cache[ku];
            if (!u_row) {
                continue;
            }
            ++stats.grid_points_certified;

            // Summing every plant's LP row gives Σ_j T_j·(-M·λ_s + (N-M)·|λ_u|)
            // ≤ -Σ_i E_i - N·δ < 0, which no positive T meets when the
            // coefficient is non-negative.
            if (static_cast<double>(m) * std::abs(ls) <=
                static_cast<double>(n - m) * std::abs(lu)) {
                ++stats.grid_points_pruned;
                continue;
            }

            CertificateSet set{ls, lu, {}};
            set.certificates.reserve(plants.size());
            for (std::size_t i = 0; i < plants.size(); ++i) {
                PlantCertificate c;
                c.plant = plants[i].index;
                c.stable = (*s_row)[i];
                c.unstable = (*u_row)[i];
                c.mu_su = jump_factor(c.stable.p, c.unstable.p);
                c.mu_us = jump_factor(c.unstable.p, c.stable.p);
                set.certificates.push_back(std::move(c));
            }
            const NcsGraph g(n, m, set.certificates);
            for (const auto& cycle : cycles) {
                ++stats.lps_solved;
                auto found = t_contractive_factors(g, cycle, budget.delta, budget.t_min);
                if (found) {
                    return Design{std::move(*found), std::move(set), stats};
                }
            }
        }
    }

    std::ostringstream os;
    os << "no T-contractive cycle found: visited " << stats.grid_points_visited
       << " rate pairs, " << stats.grid_points_certified << " certifiable, "
       << stats.grid_points_pruned << " ruled out by the summed LP rows, "
       << stats.cycles_available << " candidate cycles each (max_cycle_len "
       << budget.max_cycle_len << ", max_cycles " << budget.max_cycles << "), "
       << stats.lps_solved << " LPs solved";
    throw SearchExhausted(os.str());
}

} // namespace ncs
