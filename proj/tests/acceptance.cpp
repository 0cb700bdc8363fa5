// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance <k>        run criterion k only (1..10)
//   acceptance chain      supplementary bound-chain run on feasible designs

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ncs/cli/artifacts.hpp"
#include "ncs/cli/config.hpp"
#include "ncs/cli/generate.hpp"
#include "ncs/cycle_search.hpp"
#include "ncs/graph.hpp"
#include "ncs/scheduling.hpp"
#include "ncs/simulator.hpp"
#include "support.hpp"

#ifndef NCS_SOURCE_DIR
#define NCS_SOURCE_DIR "."
#endif

using namespace ncs;
using linalg::Matrix;
using linalg::Vector;

namespace {

// Tolerances.
constexpr double kXiMargin = 1e-6;          // criterion 1: Ξ_i ≤ -1e-6
constexpr double kNormDecay = 1e-2;         // criterion 1: ‖x(150)‖ < 1e-2·‖x(0)‖
constexpr double kRatioSlack = 1e-6;        // criteria 1, 9: relative slack on bounds
constexpr double kRuntime1 = 10.0;          // seconds
constexpr double kRuntime8 = 300.0;         // seconds
constexpr double kEigDecimals = 5e-5;       // criterion 2: four decimals
constexpr double kLyapResidual = 1e-8;      // criterion 3
constexpr double kFrontierStep = 1e-3;      // criterion 4
constexpr double kGridRes = 0.01;           // criterion 5
constexpr double kClosedForm = 1e-12;       // criterion 10: relative

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Seconds = std::chrono::duration<double>;

double elapsed(std::chrono::steady_clock::time_point t0) {
    return Seconds(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<PlantSpec> benchmark_from_config(cli::NcsConfig& cfg) {
    cfg = cli::load_config(std::string(NCS_SOURCE_DIR) + "/configs/benchmark_pair.json");
    return cli::build_plants(cfg);
}

// Σ_i a_i/(a_i+c_i) with a_i = 2·abscissa(A_i), c_i = -2·abscissa(A_i+B_iK_i).
// Each plant must be closed loop for more than that fraction of any period
// for Ξ_i < 0 to be attainable, and only M plants share the network.
double necessary_share(const std::vector<PlantSpec>& plants) {
    double total = 0.0;
    for (const auto& p : plants) {
        const double a = 2.0 * linalg::spectral_abscissa(p.open_loop());
        const double c = -2.0 * linalg::spectral_abscissa(p.closed_loop());
        total += a / (a + c);
    }
    return total;
}

std::vector<Vector> box_states(cli::Pcg64& rng, const std::vector<PlantSpec>& plants, double half) {
    std::vector<Vector> x0;
    for (const auto& p : plants) {
        Vector x(p.dim());
        for (double& v : x) {
            v = -half + 2.0 * half * rng.uniform();
        }
        x0.push_back(std::move(x));
    }
    return x0;
}

// Worst ratio V(t)/(ψ(t)·V(0)) over all switching instants of `periods`
// periods, for `seeds` random initial states per plant.
double chain_worst(const std::vector<PlantSpec>& plants, const Design& d, int seeds, int periods) {
    const auto schedule = build_schedule(d.cycle);
    const auto& certs = d.certificates.certificates;
    double worst = 0.0;
    for (int seed = 1; seed <= seeds; ++seed) {
        cli::Pcg64 rng(static_cast<std::uint64_t>(seed));
        const auto x0 = box_states(rng, plants, 10.0);
        const auto traj = simulate(plants, certs, schedule, x0, periods * schedule.period,
                                   schedule.period / 8.0);
        for (const auto& tr : traj) {
            const auto& c = certs[tr.plant - 1];
            const auto sig = switching_signal(schedule, tr.plant);
            const double v0 = tr.samples.front().v_value;
            if (tr.overflow) {
                return std::numeric_limits<double>::infinity();
            }
            for (const auto& s : tr.samples) {
                if (!s.boundary || s.t == 0.0 || v0 == 0.0) {
                    continue;
                }
                const double psi = psi_bound(c, switch_stats(sig, 0.0, s.t));
                worst = std::max(worst, s.v_value / (psi * v0));
            }
        }
    }
    return worst;
}

// Spectral radius of each plant's one-period monodromy under the reference
// two-slot schedule (plant 1 closed loop first, then plant 2).
std::vector<double> reference_monodromy_radius(const std::vector<PlantSpec>& plants, double t1,
                                               double t2) {
    std::vector<double> out;
    for (std::size_t i = 0; i < plants.size(); ++i) {
        const auto& p = plants[i];
        const Matrix first = linalg::expm(i == 0 ? p.closed_loop() : p.open_loop(), t1);
        const Matrix second = linalg::expm(i == 0 ? p.open_loop() : p.closed_loop(), t2);
        double rho = 0.0;
        for (const auto& z : linalg::eigenvalues(second * first)) {
            rho = std::max(rho, std::abs(z));
        }
        out.push_back(rho);
    }
    return out;
}

std::optional<Design> try_design(const std::vector<PlantSpec>& plants, int m, const LambdaGrid& grid,
                                 const SearchBudget& budget, double kappa, std::string& why) {
    try {
        return design_cycle(plants, m, grid, budget, {kappa});
    } catch (const Error& e) {
        why = e.what();
        return std::nullopt;
    }
}

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    cli::NcsConfig cfg;
    const auto plants = benchmark_from_config(cfg);
    std::string why;
    const auto d = try_design(plants, cfg.capacity, cfg.lambda_grid, cfg.search, cfg.kappa_floor, why);
    const double share = necessary_share(plants);
    if (!d) {
        return {false, "design failed: " + why + "; necessary share sum " + fmt("%.4f", share) +
                           " >= M=1"};
    }
    std::ostringstream os;
    bool ok = d->cycle.vertices.size() == 2;
    for (double x : d->cycle.xi_margins) {
        ok = ok && x <= -kXiMargin;
    }
    const auto schedule = build_schedule(d->cycle);
    cli::Pcg64 rng(cfg.simulate.rng_seed);
    double worst_decay = 0.0;
    bool gas = true;
    for (int run = 0; run < 10; ++run) {
        const auto x0 = box_states(rng, plants, 10.0);
        const auto traj = simulate(plants, d->certificates.certificates, schedule, x0, 150.0,
                                   cfg.simulate.sample_dt);
        for (const auto& tr : traj) {
            const double ratio = tr.samples.back().norm / tr.samples.front().norm;
            worst_decay = std::max(worst_decay, tr.overflow ? INFINITY : ratio);
            const auto rep = gas_report(tr, d->certificates.certificates[tr.plant - 1], schedule);
            for (double r : rep.ratios) {
                gas = gas && r <= rep.bound * (1 + kRatioSlack);
            }
            gas = gas && !tr.overflow;
        }
    }
    const double secs = elapsed(t0);
    ok = ok && worst_decay < kNormDecay && gas && secs <= kRuntime1;
    os << "period " << schedule.period << " (reference " << cfg.reference_period.value_or(0.0)
       << "), worst norm ratio " << worst_decay << ", runtime " << secs << " s";
    return {ok, os.str()};
}

Outcome criterion2() {
    const auto plants = testsupport::benchmark_plants();
    const std::vector<std::vector<double>> want{{0.2, 0.4, 0.8, 1.2},
                                                {-14.1705, -14.1542, -0.8933, -0.5827},
                                                {-1.0, 0.05, 0.1, 0.2},
                                                {-282.8432, -0.8686, -0.1699, -0.0777}};
    const std::vector<Matrix> mats{plants[0].open_loop(), plants[0].closed_loop(),
                                   plants[1].open_loop(), plants[1].closed_loop()};
    const char* names[] = {"A1", "A1+B1K1", "A2", "A2+B2K2"};
    bool ok = true;
    std::ostringstream os;
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<double> got;
        for (const auto& z : linalg::eigenvalues(mats[k])) {
            got.push_back(z.real());
            ok = ok && std::abs(z.imag()) < kEigDecimals;
        }
        std::sort(got.begin(), got.end());
        std::vector<double> ref = want[k];
        std::sort(ref.begin(), ref.end());
        double dev = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            dev = std::max(dev, std::abs(got[i] - ref[i]));
        }
        const bool match = dev < kEigDecimals;
        ok = ok && match;
        os << names[k] << (match ? " ok" : " off") << " (max dev " << dev;
        if (!match) {
            os << "; computed";
            for (double g : got) {
                os << ' ' << fmt("%.4f", g);
            }
        }
        os << ")" << (k + 1 < 4 ? ", " : "");
    }
    return {ok, os.str()};
}

Outcome criterion3() {
    std::mt19937_64 rng(3003);
    double worst = 0.0;
    int chol_ok = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix a = testsupport::random_hurwitz(4, rng);
        const Matrix p = linalg::lyap_solve(a, Matrix::identity(4));
        worst = std::max(worst, testsupport::lyap_residual(a, p, Matrix::identity(4)));
        try {
            (void)linalg::cholesky(p);
            ++chol_ok;
        } catch (const Error&) {
        }
    }
    return {worst <= kLyapResidual && chol_ok == 200,
            "max residual " + fmt("%.3e", worst) + ", cholesky " + std::to_string(chol_ok) + "/200"};
}

Outcome criterion4() {
    std::mt19937_64 rng(4004);
    int agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix a = testsupport::random_hurwitz(3, rng);
        const double frontier = -2.0 * linalg::spectral_abscissa(a);
        bool inside = false;
        bool outside = false;
        try {
            (void)stable_certificate(a, frontier - kFrontierStep);
            inside = true;
        } catch (const Error&) {
        }
        try {
            (void)stable_certificate(a, frontier + kFrontierStep);
        } catch (const Infeasible&) {
            outside = true;
        }
        agree += inside && outside ? 1 : 0;
    }
    return {agree == 100, std::to_string(agree) + "/100 agree"};
}

// Largest s with rows·T + s·‖row‖ ≤ rhs and 0 ≤ T ≤ 100, by enumerating
// vertices of the 3-variable polytope. Negative s means infeasible.
double chebyshev_margin(const LpProblem& p) {
    std::vector<std::array<double, 4>> cons;  // a0, a1, norm, rhs
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        cons.push_back({p.rows[r][0], p.rows[r][1], std::hypot(p.rows[r][0], p.rows[r][1]), p.rhs[r]});
    }
    cons.push_back({-1.0, 0.0, 1.0, 0.0});
    cons.push_back({0.0, -1.0, 1.0, 0.0});
    cons.push_back({1.0, 0.0, 1.0, 100.0});
    cons.push_back({0.0, 1.0, 1.0, 100.0});
    double best = -INFINITY;
    const std::size_t n = cons.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                const Matrix m{{cons[i][0], cons[i][1], cons[i][2]},
                               {cons[j][0], cons[j][1], cons[j][2]},
                               {cons[k][0], cons[k][1], cons[k][2]}};
                const Matrix b{{cons[i][3]}, {cons[j][3]}, {cons[k][3]}};
                Matrix x;
                try {
                    x = linalg::solve_linear(m, b);
                } catch (const Error&) {
                    continue;
                }
                bool feasible = true;
                for (const auto& c : cons) {
                    feasible = feasible &&
                               c[0] * x(0, 0) + c[1] * x(1, 0) + c[2] * x(2, 0) <= c[3] + 1e-9;
                }
                if (feasible) {
                    best = std::max(best, x(2, 0));
                }
            }
        }
    }
    // With no feasible vertex at all the margin is very negative; the
    // polytope in (T, s) is never empty since s can decrease freely, so a
    // vertex always exists when the rows span the plane.
    return best;
}

bool grid_feasible(const LpProblem& p) {
    const int steps = static_cast<int>(std::lround(100.0 / kGridRes));
    for (int i0 = 0; i0 <= steps; ++i0) {
        const double t0 = i0 * kGridRes;
        double lo = 0.0;
        double hi = 100.0;
        bool ok = true;
        for (std::size_t r = 0; r < p.rows.size() && ok; ++r) {
            const double slack = p.rhs[r] - p.rows[r][0] * t0;
            const double a1 = p.rows[r][1];
            if (a1 > 0) {
                hi = std::min(hi, slack / a1);
            } else if (a1 < 0) {
                lo = std::max(lo, slack / a1);
            } else if (slack < 0) {
                ok = false;
            }
        }
        const double first = std::ceil(lo / kGridRes - 1e-9) * kGridRes;
        if (ok && first <= hi + 1e-9 && first <= 100.0) {
            return true;
        }
    }
    return false;
}

Outcome criterion5() {
    std::mt19937_64 rng(5005);
    std::uniform_real_distribution<double> rate(0.1, 3.0);
    std::uniform_real_distribution<double> jump(0.0, 4.0);
    int compared = 0;
    int disagree = 0;
    int excluded = 0;
    int feasible = 0;
    for (int trial = 0; trial < 200; ++trial) {
        // T-factor LP of a two-vertex cycle on two plants with random rates.
        std::vector<PlantCertificate> certs;
        for (int i = 1; i <= 2; ++i) {
            certs.push_back(testsupport::rate_certificate(i, rate(rng), -0.5 * rate(rng),
                                                          std::exp(jump(rng)), std::exp(jump(rng))));
        }
        const NcsGraph g(2, 1, certs);
        LpProblem p = t_factor_lp(g, Cycle{VertexLabel({1}), VertexLabel({2})}, 1e-6, 1e-3);
        p.rows.push_back({1.0, 0.0});
        p.rhs.push_back(100.0);
        p.rows.push_back({0.0, 1.0});
        p.rhs.push_back(100.0);
        const bool lp = lp_feasible(p).feasible();
        feasible += lp ? 1 : 0;
        if (std::abs(chebyshev_margin(p)) <= kGridRes) {
            ++excluded;
            continue;
        }
        ++compared;
        disagree += lp != grid_feasible(p) ? 1 : 0;
    }
    return {disagree == 0 && compared > 0,
            std::to_string(disagree) + " disagreements on " + std::to_string(compared) +
                " instances (" + std::to_string(excluded) + " within grid resolution excluded, " +
                std::to_string(feasible) + " feasible)"};
}

Outcome criterion6() {
    const auto two = covering_cycles(2, 1, 1000, 12);
    std::set<Cycle> two_canon;
    for (const auto& c : two) {
        two_canon.insert(canonical_rotation(c));
    }
    const bool ok2 = two.size() == 1 && two_canon.size() == 1;

    // Brute force: every ordering of {1},{2},{3} as a closed walk, up to rotation.
    std::set<Cycle> expected;
    std::vector<int> perm{1, 2, 3};
    do {
        Cycle c;
        for (int v : perm) {
            c.emplace_back(std::vector<int>{v});
        }
        expected.insert(canonical_rotation(c));
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto three = covering_cycles(3, 1, 1000, 3);
    std::set<Cycle> got;
    for (const auto& c : three) {
        got.insert(canonical_rotation(c));
    }
    const bool ok3 = got == expected && three.size() == expected.size();
    return {ok2 && ok3, "N=2: " + std::to_string(two.size()) + " cycle(s); N=3: " +
                            std::to_string(three.size()) + " vs brute force " +
                            std::to_string(expected.size())};
}

Outcome criterion7() {
    using boost::multiprecision::cpp_int;
    struct Row {
        int n;
        double mantissa;  // as printed
        int exponent;
        double unit;      // one unit in the last printed digit
    };
    const std::vector<Row> rows{{100, 1.73, 13, 0.01},
                                {200, 2.24, 16, 0.01},
                                {500, 2.45, 20, 0.01},
                                {700, 7.3, 21, 0.1},
                                {1000, 2.63, 23, 0.01}};
    bool ok = vertex_count(100, 10) == cpp_int("17310309456440");
    std::ostringstream os;
    os << "C(100,10)=" << vertex_count(100, 10);
    for (const auto& r : rows) {
        const double v = vertex_count(r.n, 10).convert_to<double>() / std::pow(10.0, r.exponent);
        const bool match = std::abs(v - r.mantissa) < r.unit;
        ok = ok && match;
        os << "; C(" << r.n << ",10)=" << fmt("%.4f", v) << "e" << r.exponent << (match ? " ok" : " off");
    }
    return {ok, os.str()};
}

struct ScaleRun {
    std::optional<Design> design;
    std::vector<PlantSpec> plants;
    std::string why;
    std::string relaxed_why;
    double secs = 0.0;
    double share = 0.0;
};

ScaleRun scale_design() {
    const auto t0 = std::chrono::steady_clock::now();
    cli::GenerateOptions g;
    g.n_plants = 100;
    g.capacity = 10;
    g.seed = 7;
    const auto cfg = cli::generate_config(g);
    ScaleRun r;
    r.plants = cli::build_plants(cfg);
    r.share = necessary_share(r.plants);
    r.design = try_design(r.plants, cfg.capacity, cfg.lambda_grid, cfg.search, cfg.kappa_floor, r.why);
    r.secs = elapsed(t0);
    if (!r.design) {
        // Diagnostic only: the same search with the conditioning floor removed.
        (void)try_design(r.plants, cfg.capacity, cfg.lambda_grid, cfg.search, 1e-12, r.relaxed_why);
    }
    return r;
}

Outcome criterion8() {
    const auto r = scale_design();
    if (!r.design) {
        return {false, "design failed after " + fmt("%.2f", r.secs) + " s: " + r.why +
                           "; necessary share sum " + fmt("%.2f", r.share) +
                           " >= M=10; with kappa floor 1e-12: " + r.relaxed_why};
    }
    const auto& d = *r.design;
    const NcsGraph g(100, 10, d.certificates.certificates);
    const auto xi = g.xi(d.cycle.vertices, d.cycle.t_factors);
    const bool neg = std::all_of(xi.begin(), xi.end(), [](double x) { return x < 0.0; });
    const bool ok = d.cycle.vertices.size() >= 10 && neg && r.secs <= kRuntime8;
    return {ok, "cycle length " + std::to_string(d.cycle.vertices.size()) + ", runtime " +
                    fmt("%.2f", r.secs) + " s"};
}

Outcome criterion9() {
    std::ostringstream os;
    bool ok = true;
    int designs = 0;

    cli::NcsConfig cfg;
    const auto plants = benchmark_from_config(cfg);
    std::string why;
    if (auto d = try_design(plants, cfg.capacity, cfg.lambda_grid, cfg.search, cfg.kappa_floor, why)) {
        ++designs;
        const double w = chain_worst(plants, *d, 10, 5);
        ok = ok && w <= 1 + kRatioSlack;
        os << "benchmark pair worst ratio " << w << "; ";
    } else {
        const auto rho = reference_monodromy_radius(plants, 19.25, 9.36);
        os << "benchmark pair: no design; reference schedule monodromy radii " << fmt("%.4g", rho[0])
           << ", " << fmt("%.4g", rho[1]) << "; ";
    }
    const auto r = scale_design();
    if (r.design) {
        ++designs;
        const double w = chain_worst(r.plants, *r.design, 10, 5);
        ok = ok && w <= 1 + kRatioSlack;
        os << "N=100 worst ratio " << w;
    } else {
        os << "N=100: no design";
    }
    ok = ok && designs == 2;
    return {ok, os.str()};
}

Outcome criterion10() {
    const std::vector<PlantSpec> plants{make_plant(1, Matrix{{0.5}}, Matrix{{1.0}}, Matrix{{-1.5}}),
                                        make_plant(2, Matrix{{0.5}}, Matrix{{1.0}}, Matrix{{-1.5}})};
    const std::vector<PlantCertificate> certs{testsupport::rate_certificate(1, 2.0, -1.0, 1.0, 1.0),
                                              testsupport::rate_certificate(2, 2.0, -1.0, 1.0, 1.0)};
    const auto s = make_schedule(2, {{VertexLabel({1}), 2.0}, {VertexLabel({2}), 1.0}});
    const auto traj = simulate(plants, certs, s, {Vector{1.0}, Vector{1.0}}, 3.0, 0.05);
    const double got = traj[0].samples.back().x[0];
    const double want = std::exp(-1.5);
    const double rel = std::abs(got - want) / want;
    return {traj[0].samples.back().t == 3.0 && rel <= kClosedForm,
            "x1(3)=" + fmt("%.17g", got) + ", relative error " + fmt("%.2e", rel)};
}

// Non-gating: the bound chain on designs that exist.
Outcome supplementary_chain() {
    std::ostringstream os;
    bool ok = true;
    const std::vector<PlantSpec> syn{testsupport::synthetic_plant(1), testsupport::synthetic_plant(2)};
    std::string why;
    const auto d = try_design(syn, 1, testsupport::synthetic_grid(), SearchBudget{}, 0.01, why);
    if (!d) {
        return {false, "synthetic design failed: " + why};
    }
    double w = chain_worst(syn, *d, 10, 5);
    ok = ok && w <= 1 + kRatioSlack;
    os << "synthetic worst ratio " << fmt("%.6f", w);

    LambdaGrid grid;
    grid.s_min = 1.0;
    grid.s_max = 3.0;
    grid.h_s = 0.5;
    grid.u_min = -1.0;
    grid.u_max = 0.0;
    grid.h_u = 0.1;
    for (int n : {4, 8}) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(900 + n));
        const auto plants = testsupport::easy_plants(n, rng);
        const auto e = try_design(plants, n / 4, grid, SearchBudget{}, 1e-6, why);
        if (!e) {
            return {false, "easy design failed: " + why};
        }
        w = chain_worst(plants, *e, 10, 5);
        ok = ok && w <= 1 + kRatioSlack;
        os << "; N=" << n << " cycle length " << e->cycle.vertices.size() << " worst ratio "
           << fmt("%.6f", w);
    }
    return {ok, os.str()};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1", criterion1}, {"2", criterion2}, {"3", criterion3}, {"4", criterion4},
        {"5", criterion5}, {"6", criterion6}, {"7", criterion7}, {"8", criterion8},
        {"9", criterion9}, {"10", criterion10}, {"chain", supplementary_chain}};
    const std::string only = argc > 1 ? argv[1] : "";
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        if (only.empty() ? name == "chain" : name != only) {
            continue;
        }
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const std::string label = name == "chain" ? "supplementary chain" : "criterion " + name;
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", label.c_str(), o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
