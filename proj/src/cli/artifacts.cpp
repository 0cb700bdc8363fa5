#include "ncs/cli/artifacts.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ncs::cli {

Pcg64::Pcg64(std::uint64_t seed, std::uint64_t stream) {
    inc_ = (static_cast<unsigned __int128>(stream) << 1) | 1u;
    state_ = 0;
    step();
    state_ += seed;
    step();
}

std::uint64_t Pcg64::next() {
    step();
    const auto hi = static_cast<std::uint64_t>(state_ >> 64);
    const auto lo = static_cast<std::uint64_t>(state_);
    const auto rot = static_cast<unsigned>(state_ >> 122);
    const std::uint64_t x = hi ^ lo;
    return (x >> rot) | (x << ((64u - rot) & 63u));
}

double Pcg64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Json certificate_to_json(const PlantCertificate& c) {
    Json j;
    j["plant"] = c.plant;
    j["lambda_s"] = c.stable.lambda;
    j["lambda_u"] = c.unstable.lambda;
    j["kappa_s"] = c.stable.kappa_eff;
    j["kappa_u"] = c.unstable.kappa_eff;
    j["mu_su"] = c.mu_su;
    j["mu_us"] = c.mu_us;
    j["P_s"] = matrix_to_json(c.stable.p);
    j["P_u"] = matrix_to_json(c.unstable.p);
    return j;
}

PlantCertificate certificate_from_json(const Json& j, const std::string& field) {
    auto num = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number()) {
            throw ConfigError(field + "/" + key, "missing or not a number");
        }
        return j[key].get<double>();
    };
    PlantCertificate c;
    if (!j.contains("plant") || !j["plant"].is_number_integer()) {
        throw ConfigError(field + "/plant", "missing or not an integer");
    }
    c.plant = j["plant"].get<int>();
    c.stable.mode = Mode::stable;
    c.stable.lambda = num("lambda_s");
    c.stable.kappa_eff = num("kappa_s");
    c.unstable.mode = Mode::unstable;
    c.unstable.lambda = num("lambda_u");
    c.unstable.kappa_eff = num("kappa_u");
    c.mu_su = num("mu_su");
    c.mu_us = num("mu_us");
    if (!j.contains("P_s") || !j.contains("P_u")) {
        throw ConfigError(field, "missing P_s or P_u");
    }
    c.stable.p = matrix_from_json(j["P_s"], field + "/P_s");
    c.unstable.p = matrix_from_json(j["P_u"], field + "/P_u");
    return c;
}

Json schedule_to_json(const ScheduleArtifact& a) {
    Json j;
    j["n_plants"] = a.n_plants;
    j["capacity"] = a.capacity;
    Json cycle = Json::array();
    for (const auto& v : a.design.vertices) {
        cycle.push_back(v.plants());
    }
    j["cycle"] = std::move(cycle);
    j["t_factors"] = a.design.t_factors;
    j["period"] = a.design.period();
    if (a.reference_period) {
        j["reference_period"] = *a.reference_period;
    }
    j["xi_margins"] = a.design.xi_margins;
    j["lambda_s"] = a.certificates.lambda_s;
    j["lambda_u"] = a.certificates.lambda_u;
    Json certs = Json::array();
    for (const auto& c : a.certificates.certificates) {
        certs.push_back(certificate_to_json(c));
    }
    j["certificates"] = std::move(certs);
    j["search"] = {{"grid_points_visited", a.stats.grid_points_visited},
                   {"grid_points_certified", a.stats.grid_points_certified},
                   {"grid_points_pruned", a.stats.grid_points_pruned},
                   {"lps_solved", a.stats.lps_solved},
                   {"cycles_available", a.stats.cycles_available}};
    return j;
}

ScheduleArtifact schedule_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ConfigError("", "schedule root must be an object");
    }
    auto field = [&](const char* key) -> const Json& {
        if (!j.contains(key)) {
            throw ConfigError(std::string("/") + key, "missing required field");
        }
        return j[key];
    };
    ScheduleArtifact a;
    if (!field("n_plants").is_number_integer() || !field("capacity").is_number_integer()) {
        throw ConfigError("/n_plants", "n_plants and capacity must be integers");
    }
    a.n_plants = field("n_plants").get<int>();
    a.capacity = field("capacity").get<int>();
    const Json& cycle = field("cycle");
    const Json& tf = field("t_factors");
    if (!cycle.is_array() || !tf.is_array() || cycle.size() != tf.size()) {
        throw ConfigError("/cycle", "cycle and t_factors must be arrays of equal length");
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        try {
            a.design.vertices.emplace_back(cycle[i].get<std::vector<int>>());
            a.design.t_factors.push_back(tf[i].get<double>());
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("/cycle/" + std::to_string(i), e.what());
        }
    }
    try {
        a.design.xi_margins = field("xi_margins").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("/xi_margins", e.what());
    }
    if (j.contains("reference_period") && j["reference_period"].is_number()) {
        a.reference_period = j["reference_period"].get<double>();
    }
    a.certificates.lambda_s = field("lambda_s").get<double>();
    a.certificates.lambda_u = field("lambda_u").get<double>();
    const Json& certs = field("certificates");
    if (!certs.is_array() || certs.size() != static_cast<std::size_t>(a.n_plants)) {
        throw ConfigError("/certificates", "expected one certificate per plant");
    }
    for (std::size_t i = 0; i < certs.size(); ++i) {
        a.certificates.certificates.push_back(
            certificate_from_json(certs[i], "/certificates/" + std::to_string(i)));
    }
    if (j.contains("search") && j["search"].is_object()) {
        const auto& s = j["search"];
        a.stats.grid_points_visited = s.value("grid_points_visited", std::size_t{0});
        a.stats.grid_points_certified = s.value("grid_points_certified", std::size_t{0});
        a.stats.grid_points_pruned = s.value("grid_points_pruned", std::size_t{0});
        a.stats.lps_solved = s.value("lps_solved", std::size_t{0});
        a.stats.cycles_available = s.value("cycles_available", std::size_t{0});
    }
    return a;
}

ScheduleArtifact load_schedule(const std::string& path) {
    return schedule_from_json(read_json_file(path));
}

void write_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
        out << contents;
        out.flush();
        if (!out) {
            throw Error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_csv_rows(std::string& out, int run_id, const Trajectory& traj) {
    const std::string prefix = std::to_string(run_id) + "," + std::to_string(traj.plant) + ",";
    for (const auto& s : traj.samples) {
        out += prefix;
        out += format_double(s.t);
        out += ',';
        out += to_string(s.mode);
        out += ',';
        out += format_double(s.norm);
        out += ',';
        out += format_double(s.v_value);
        out += '\n';
    }
}

std::vector<CsvRow> read_trajectories_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, "cannot open trajectory file");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError(path, "no runs found");
    }
    if (line != kTrajectoryHeader) {
        throw ConfigError(path, "unexpected header '" + line + "'");
    }
    std::vector<CsvRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        std::string cell[6];
        for (int c = 0; c < 6; ++c) {
            if (!std::getline(ss, cell[c], ',')) {
                throw ConfigError(path + ":" + std::to_string(lineno), "expected 6 columns");
            }
        }
        CsvRow r;
        try {
            r.run_id = std::stoi(cell[0]);
            r.plant = std::stoi(cell[1]);
            r.t = std::stod(cell[2]);
            r.norm_x = std::stod(cell[4]);
            r.v_value = std::stod(cell[5]);
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(lineno), "malformed number");
        }
        if (cell[3] == "stable") {
            r.mode = Mode::stable;
        } else if (cell[3] == "unstable") {
            r.mode = Mode::unstable;
        } else {
            throw ConfigError(path + ":" + std::to_string(lineno), "unknown mode '" + cell[3] + "'");
        }
        rows.push_back(r);
    }
    if (rows.empty()) {
        throw ConfigError(path, "no runs found");
    }
    return rows;
}

} // namespace ncs::cli
