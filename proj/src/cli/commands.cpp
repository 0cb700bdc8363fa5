#include "ncs/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>

#include "ncs/cli/artifacts.hpp"
#include "ncs/cli/config.hpp"
#include "ncs/cli/generate.hpp"
#include "ncs/cli/svg.hpp"
#include "ncs/cycle_search.hpp"
#include "ncs/graph.hpp"
#include "ncs/scheduling.hpp"
#include "ncs/simulator.hpp"

namespace ncs::cli {

namespace fs = std::filesystem;

namespace {

std::string out_path(const CommandOptions& opts, const std::string& name) {
    return (fs::path(opts.out) / name).string();
}

std::string default_path(const std::string& given, const CommandOptions& opts,
                         const std::string& name) {
    return given.empty() ? out_path(opts, name) : given;
}

void require_config(const CommandOptions& opts) {
    if (opts.config.empty()) {
        throw ConfigError("--config", "a config file is required");
    }
}

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// Schedule rebuilt from an artifact and checked against the config.
struct LoadedSchedule {
    ScheduleArtifact artifact;
    ScheduleLogic logic;
};

LoadedSchedule load_consistent_schedule(const std::string& path, const NcsConfig* cfg) {
    LoadedSchedule ls;
    ls.artifact = load_schedule(path);
    const auto& a = ls.artifact;
    if (cfg && a.n_plants != cfg->n_plants()) {
        throw ConfigError("/n_plants", "schedule is for " + std::to_string(a.n_plants) +
                                           " plants but the config has " +
                                           std::to_string(cfg->n_plants()));
    }
    if (cfg && a.capacity != cfg->capacity) {
        throw ConfigError("/capacity", "schedule capacity " + std::to_string(a.capacity) +
                                           " differs from config capacity " +
                                           std::to_string(cfg->capacity));
    }
    if (cfg) {
        for (std::size_t i = 0; i < cfg->plants.size(); ++i) {
            const auto d = cfg->plants[i].a.rows();
            const auto& c = a.certificates.certificates[i];
            if (c.stable.p.rows() != d || c.unstable.p.rows() != d) {
                throw ConfigError("/certificates/" + std::to_string(i),
                                  "certificate dimension does not match plant " +
                                      std::to_string(i + 1) + " (d=" + std::to_string(d) + ")");
            }
        }
    }
    std::vector<ScheduleSegment> segs;
    for (std::size_t j = 0; j < a.design.vertices.size(); ++j) {
        segs.push_back({a.design.vertices[j], a.design.t_factors[j]});
    }
    try {
        ls.logic = make_schedule(a.n_plants, std::move(segs));
    } catch (const Error& e) {
        throw ConfigError("/cycle", e.what());
    }

    // Round trip: the stored margins must follow from the stored data.
    const NcsGraph g(a.n_plants, a.capacity, a.certificates.certificates);
    const auto xi = g.xi(a.design.vertices, a.design.t_factors);
    if (xi.size() != a.design.xi_margins.size()) {
        throw ConfigError("/xi_margins", "expected one margin per plant");
    }
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const double tol = 1e-12 * std::max(1.0, std::abs(xi[i]));
        if (std::abs(xi[i] - a.design.xi_margins[i]) > tol) {
            throw ConfigError("/xi_margins/" + std::to_string(i),
                              "stored margin " + fixed(a.design.xi_margins[i], 17) +
                                  " does not match recomputed " + fixed(xi[i], 17));
        }
    }
    return ls;
}

} // namespace

int cmd_certify(const CommandOptions& opts, std::ostream& log) {
    require_config(opts);
    const NcsConfig cfg = load_config(opts.config);
    const auto plants = build_plants(cfg);
    const auto set = certify_all(plants, cfg.lambda_grid, {cfg.kappa_floor});

    Json j;
    j["lambda_s"] = set.lambda_s;
    j["lambda_u"] = set.lambda_u;
    Json arr = Json::array();
    for (std::size_t i = 0; i < plants.size(); ++i) {
        Json c = certificate_to_json(set.certificates[i]);
        c["abscissa_closed_loop"] = linalg::spectral_abscissa(plants[i].closed_loop());
        c["abscissa_open_loop"] = linalg::spectral_abscissa(plants[i].open_loop());
        arr.push_back(std::move(c));
    }
    j["certificates"] = std::move(arr);
    write_atomic(out_path(opts, "certificates.json"), j.dump(2) + "\n");

    log << "certified " << plants.size() << " plants at lambda_s=" << fixed(set.lambda_s)
        << " lambda_u=" << fixed(set.lambda_u) << "\n";
    for (const auto& c : set.certificates) {
        log << "  plant " << c.plant << ": kappa_s=" << fixed(c.stable.kappa_eff)
            << " kappa_u=" << fixed(c.unstable.kappa_eff) << " mu_su=" << fixed(c.mu_su)
            << " mu_us=" << fixed(c.mu_us) << "\n";
    }
    return kExitOk;
}

int cmd_design(const CommandOptions& opts, std::ostream& log) {
    require_config(opts);
    const NcsConfig cfg = load_config(opts.config);
    const auto plants = build_plants(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    Design d = design_cycle(plants, cfg.capacity, cfg.lambda_grid, cfg.search, {cfg.kappa_floor});
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ScheduleArtifact art;
    art.n_plants = cfg.n_plants();
    art.capacity = cfg.capacity;
    art.design = std::move(d.cycle);
    art.certificates = std::move(d.certificates);
    art.stats = d.stats;
    art.reference_period = cfg.reference_period;
    write_atomic(out_path(opts, "schedule.json"), schedule_to_json(art).dump(2) + "\n");

    log << "design: cycle of length " << art.design.vertices.size() << ", period "
        << fixed(art.design.period()) << ", worst xi "
        << fixed(*std::max_element(art.design.xi_margins.begin(), art.design.xi_margins.end()))
        << " (" << fixed(secs, 3) << " s)\n";
    return kExitOk;
}

int cmd_simulate(const CommandOptions& opts, std::ostream& log) {
    require_config(opts);
    const NcsConfig cfg = load_config(opts.config);
    const auto loaded =
        load_consistent_schedule(default_path(opts.schedule, opts, "schedule.json"), &cfg);
    const auto plants = build_plants(cfg);
    const auto& certs = loaded.artifact.certificates.certificates;
    const auto& sim = cfg.simulate;
    if (sim.horizon < 2.0 * loaded.logic.period) {
        throw ConfigError("/simulate/horizon", "must cover at least two schedule periods (" +
                                                   fixed(2.0 * loaded.logic.period) + ")");
    }

    const std::uint64_t seed = opts.seed.value_or(sim.rng_seed);
    Pcg64 rng(seed);
    std::string csv = std::string(kTrajectoryHeader) + "\n";
    std::vector<std::vector<Series>> plots(plants.size());
    Json runs = Json::array();
    bool all_pass = true;

    for (int run = 0; run < sim.n_initial; ++run) {
        std::vector<Vector> x0(plants.size());
        for (std::size_t i = 0; i < plants.size(); ++i) {
            x0[i].resize(plants[i].dim());
            for (double& v : x0[i]) {
                v = rng.uniform(-sim.init_box_halfwidth, sim.init_box_halfwidth);
            }
        }
        const auto trajs = simulate(plants, certs, loaded.logic, x0, sim.horizon, sim.sample_dt);
        Json rj;
        rj["run_id"] = run;
        Json pj = Json::array();
        for (std::size_t i = 0; i < trajs.size(); ++i) {
            const auto& tr = trajs[i];
            append_csv_rows(csv, run, tr);
            const GasReport rep = gas_report(tr, certs[i], loaded.logic);
            all_pass = all_pass && rep.pass;
            Json e;
            e["plant"] = tr.plant;
            e["initial_norm"] = tr.samples.empty() ? 0.0 : tr.samples.front().norm;
            e["final_norm"] = tr.samples.empty() ? 0.0 : tr.samples.back().norm;
            e["final_t"] = tr.samples.empty() ? 0.0 : tr.samples.back().t;
            e["xi"] = rep.xi;
            e["bound"] = rep.bound;
            e["c"] = rep.c;
            e["ratios"] = rep.ratios;
            e["worst_ratio"] = rep.worst_ratio;
            e["worst_period"] = rep.worst_period;
            e["trivially_converged"] = rep.trivially_converged;
            e["overflow"] = rep.overflow;
            if (!tr.diagnostic.empty()) {
                e["diagnostic"] = tr.diagnostic;
            }
            e["pass"] = rep.pass;
            pj.push_back(std::move(e));

            Series s;
            s.label = "run " + std::to_string(run);
            s.points.reserve(tr.samples.size());
            for (const auto& smp : tr.samples) {
                s.points.emplace_back(smp.t, smp.norm);
            }
            plots[i].push_back(std::move(s));
        }
        rj["plants"] = std::move(pj);
        runs.push_back(std::move(rj));
    }

    Json report;
    report["seed"] = seed;
    report["horizon"] = sim.horizon;
    report["sample_dt"] = sim.sample_dt;
    report["period"] = loaded.logic.period;
    if (loaded.artifact.reference_period) {
        report["reference_period"] = *loaded.artifact.reference_period;
    }
    report["ratio_slack"] = kGasRatioSlack;
    report["runs"] = std::move(runs);
    report["pass"] = all_pass;

    write_atomic(out_path(opts, "trajectories.csv"), csv);
    write_atomic(out_path(opts, "report.json"), report.dump(2) + "\n");
    for (std::size_t i = 0; i < plants.size(); ++i) {
        PlotOptions po;
        po.title = "plant " + std::to_string(i + 1) + ": state norm";
        po.log_y = opts.log_scale;
        write_atomic(out_path(opts, "plant_" + std::to_string(i + 1) + ".svg"),
                     render_line_plot(plots[i], po));
    }
    log << "simulate: " << sim.n_initial << " runs, " << plants.size() << " plants, "
        << (all_pass ? "all per-period ratios within bound" : "GAS check FAILED") << "\n";
    return all_pass ? kExitOk : kExitGasFailed;
}

int cmd_generate(const CommandOptions& opts, std::ostream& log) {
    GenerateOptions g;
    g.n_plants = opts.plants;
    g.capacity = opts.capacity;
    g.seed = opts.seed.value_or(1);
    NcsConfig cfg = generate_config(g);
    cfg.simulate.rng_seed = g.seed;
    write_atomic(out_path(opts, "config.json"), config_to_json(cfg).dump(2) + "\n");
    const auto vertices = vertex_count(g.n_plants, g.capacity);
    log << "generate: " << g.n_plants << " plants, capacity " << g.capacity << ", graph has "
        << vertices.str() << " vertices\n";
    return kExitOk;
}

int cmd_report(const CommandOptions& opts, std::ostream& log) {
    const auto loaded =
        load_consistent_schedule(default_path(opts.schedule, opts, "schedule.json"), nullptr);
    const auto rows = read_trajectories_csv(default_path(opts.trajectories, opts, "trajectories.csv"));
    const auto& art = loaded.artifact;
    const double period = loaded.logic.period;

    // (plant, run) -> V at each period boundary, in time order.
    std::map<int, std::map<int, std::vector<std::pair<double, double>>>> series;
    for (const auto& r : rows) {
        if (r.plant < 1 || r.plant > art.n_plants) {
            throw ConfigError("trajectories", "plant " + std::to_string(r.plant) +
                                                  " is not in the schedule");
        }
        series[r.plant][r.run_id].emplace_back(r.t, r.v_value);
    }

    std::string md;
    md += "# Schedule verification summary\n\n";
    md += "- plants: " + std::to_string(art.n_plants) + ", capacity: " + std::to_string(art.capacity) + "\n";
    md += "- cycle length: " + std::to_string(art.design.vertices.size()) + "\n";
    md += "- period: " + fixed(period) + "\n";
    if (art.reference_period) {
        md += "- reference period: " + fixed(*art.reference_period) + "\n";
    }
    md += "- runs: " + std::to_string(series.begin()->second.size()) + "\n\n";
    md += "| plant | lambda_s | lambda_u | mu_su | mu_us | xi | exp(xi) | worst ratio | result |\n";
    md += "|---|---|---|---|---|---|---|---|---|\n";

    bool all_pass = true;
    for (int plant = 1; plant <= art.n_plants; ++plant) {
        const auto& cert = art.certificates.certificates[static_cast<std::size_t>(plant - 1)];
        const double xi =
            log_psi_bound(cert, switch_stats(switching_signal(loaded.logic, plant), 0.0, period));
        const double bound = std::exp(xi);
        double worst = 0.0;
        bool pass = true;
        std::string violation;
        bool any_ratio = false;
        auto it = series.find(plant);
        if (it != series.end()) {
            for (const auto& [run, pts] : it->second) {
                std::vector<double> v_at;
                for (int m = 0;; ++m) {
                    const double target = m * period;
                    if (pts.empty() || target > pts.back().first + 1e-9 * std::max(1.0, target)) {
                        break;
                    }
                    const auto pos = std::lower_bound(
                        pts.begin(), pts.end(), target - 1e-9 * std::max(1.0, target),
                        [](const auto& p, double t) { return p.first < t; });
                    if (pos == pts.end() ||
                        std::abs(pos->first - target) > 1e-9 * std::max(1.0, target)) {
                        break;
                    }
                    v_at.push_back(pos->second);
                }
                for (std::size_t m = 0; m + 1 < v_at.size(); ++m) {
                    double ratio = 0.0;
                    if (v_at[m] > 0.0) {
                        ratio = v_at[m + 1] / v_at[m];
                    } else if (v_at[m + 1] > 0.0) {
                        ratio = std::numeric_limits<double>::infinity();
                    }
                    if (!any_ratio || ratio > worst) {
                        worst = ratio;
                    }
                    any_ratio = true;
                    if (!(ratio <= bound * (1.0 + kGasRatioSlack)) && pass) {
                        pass = false;
                        violation = " (run " + std::to_string(run) + ", period " + std::to_string(m) + ")";
                    }
                }
            }
        }
        if (!any_ratio) {
            pass = false;
            violation = " (no full period recorded)";
        }
        all_pass = all_pass && pass;
        md += "| " + std::to_string(plant) + " | " + fixed(cert.stable.lambda) + " | " +
              fixed(cert.unstable.lambda) + " | " + fixed(cert.mu_su) + " | " + fixed(cert.mu_us) +
              " | " + fixed(xi) + " | " + fixed(bound) + " | " + fixed(worst) + " | " +
              (pass ? "PASS" : "FAIL" + violation) + " |\n";
    }
    write_atomic(out_path(opts, "summary.md"), md);
    log << "report: " << (all_pass ? "all plants PASS" : "some plants FAIL") << "\n";
    return all_pass ? kExitOk : kExitGasFailed;
}

int run_command(const std::string& name, const CommandOptions& opts, std::ostream& log) {
    try {
        if (name == "certify") {
            return cmd_certify(opts, log);
        }
        if (name == "design") {
            return cmd_design(opts, log);
        }
        if (name == "simulate") {
            return cmd_simulate(opts, log);
        }
        if (name == "generate") {
            return cmd_generate(opts, log);
        }
        if (name == "report") {
            return cmd_report(opts, log);
        }
        log << "error: unknown command '" << name << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidCapacity& e) {
        log << "config error: InvalidCapacity: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CapacityInvalid& e) {
        log << "config error: CapacityInvalid: " << e.what() << "\n";
        return kExitConfig;
    } catch (const GenerationStalled& e) {
        log << "config error: GenerationStalled: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DimensionMismatch& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const AssumptionViolated& e) {
        log << "certification failed: plant " << e.plant() << ": " << e.what() << "\n";
        return kExitCertification;
    } catch (const NoFeasibleRate& e) {
        log << "certification failed: NoFeasibleRate: " << e.what() << "\n";
        return kExitCertification;
    } catch (const NotStabilizable& e) {
        log << "certification failed: NotStabilizable: " << e.what() << "\n";
        return kExitCertification;
    } catch (const SearchExhausted& e) {
        log << "search exhausted: " << e.what() << "\n";
        return kExitSearchExhausted;
    } catch (const fs::filesystem_error& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace ncs::cli
