#include "ncs/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ncs::cli {

namespace {

const Json& require(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(path + "/" + key, "missing required field");
    }
    return *it;
}

double get_number(const Json& j, const std::string& path) {
    if (!j.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError(path, "must be finite");
    }
    return v;
}

long long get_integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        throw ConfigError(path, "expected an integer");
    }
    return j.get<long long>();
}

double opt_number(const Json& parent, const char* key, const std::string& path, double fallback) {
    auto it = parent.find(key);
    return it == parent.end() ? fallback : get_number(*it, path + "/" + key);
}

long long opt_integer(const Json& parent, const char* key, const std::string& path,
                      long long fallback) {
    auto it = parent.find(key);
    return it == parent.end() ? fallback : get_integer(*it, path + "/" + key);
}

} // namespace

Json matrix_to_json(const Matrix& m) {
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    Json data = Json::array();
    for (double v : m.data()) {
        data.push_back(v);
    }
    j["data"] = std::move(data);
    return j;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
    const auto rows = get_integer(require(j, "rows", field), field + "/rows");
    const auto cols = get_integer(require(j, "cols", field), field + "/cols");
    if (rows <= 0 || cols <= 0) {
        throw ConfigError(field, "rows and cols must be positive");
    }
    const Json& data = require(j, "data", field);
    if (!data.is_array()) {
        throw ConfigError(field + "/data", "expected an array");
    }
    if (data.size() != static_cast<std::size_t>(rows * cols)) {
        throw ConfigError(field + "/data", "has " + std::to_string(data.size()) +
                                               " entries, expected " +
                                               std::to_string(rows * cols));
    }
    std::vector<double> values;
    values.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        values.push_back(get_number(data[i], field + "/data/" + std::to_string(i)));
    }
    return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(values));
}

NcsConfig parse_config(const Json& j) {
    if (!j.is_object()) {
        throw ConfigError("", "config root must be an object");
    }
    NcsConfig cfg;

    const Json& plants = require(j, "plants", "");
    if (!plants.is_array() || plants.empty()) {
        throw ConfigError("/plants", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < plants.size(); ++i) {
        const std::string path = "/plants/" + std::to_string(i);
        PlantConfig pc;
        pc.a = matrix_from_json(require(plants[i], "A", path), path + "/A");
        pc.b = matrix_from_json(require(plants[i], "B", path), path + "/B");
        if (plants[i].contains("K") && !plants[i]["K"].is_null()) {
            pc.k = matrix_from_json(plants[i]["K"], path + "/K");
        }
        if (!pc.a.is_square()) {
            throw ConfigError(path + "/A", "must be square");
        }
        if (pc.b.rows() != pc.a.rows()) {
            throw ConfigError(path + "/B", "row count must match A");
        }
        if (pc.k && (pc.k->rows() != pc.b.cols() || pc.k->cols() != pc.a.rows())) {
            throw ConfigError(path + "/K", "must be " + std::to_string(pc.b.cols()) + "x" +
                                               std::to_string(pc.a.rows()));
        }
        cfg.plants.push_back(std::move(pc));
    }

    const auto m = get_integer(require(j, "capacity", ""), "/capacity");
    if (!(m > 0 && m < static_cast<long long>(cfg.plants.size()))) {
        throw ConfigError("/capacity", "InvalidCapacity: need 0 < M < N, got M=" +
                                           std::to_string(m) + ", N=" +
                                           std::to_string(cfg.plants.size()));
    }
    cfg.capacity = static_cast<int>(m);

    if (auto it = j.find("lambda_grid"); it != j.end()) {
        const std::string p = "/lambda_grid";
        if (!it->is_object()) {
            throw ConfigError(p, "expected an object");
        }
        auto& g = cfg.lambda_grid;
        g.s_min = opt_number(*it, "lambda_s_min", p, g.s_min);
        g.s_max = opt_number(*it, "lambda_s_max", p, g.s_max);
        g.h_s = opt_number(*it, "h_s", p, g.h_s);
        g.u_min = opt_number(*it, "lambda_u_min", p, g.u_min);
        g.u_max = opt_number(*it, "lambda_u_max", p, g.u_max);
        g.h_u = opt_number(*it, "h_u", p, g.h_u);
        try {
            g.validate();
        } catch (const Error& e) {
            throw ConfigError(p, e.what());
        }
    }

    cfg.kappa_floor = opt_number(j, "kappa_floor", "", cfg.kappa_floor);
    if (!(cfg.kappa_floor > 0.0 && cfg.kappa_floor < 1.0)) {
        throw ConfigError("/kappa_floor", "must lie in (0, 1)");
    }

    if (auto it = j.find("search"); it != j.end()) {
        const std::string p = "/search";
        if (!it->is_object()) {
            throw ConfigError(p, "expected an object");
        }
        auto& s = cfg.search;
        const auto len = opt_integer(*it, "max_cycle_len", p, static_cast<long long>(s.max_cycle_len));
        const auto count = opt_integer(*it, "max_cycles", p, static_cast<long long>(s.max_cycles));
        if (len < 2) {
            throw ConfigError(p + "/max_cycle_len", "must be at least 2");
        }
        if (count < 1) {
            throw ConfigError(p + "/max_cycles", "must be positive");
        }
        s.max_cycle_len = static_cast<std::size_t>(len);
        s.max_cycles = static_cast<std::size_t>(count);
        s.delta = opt_number(*it, "delta", p, s.delta);
        s.t_min = opt_number(*it, "t_min", p, s.t_min);
        if (!(s.delta > 0.0)) {
            throw ConfigError(p + "/delta", "must be positive");
        }
        if (!(s.t_min > 0.0)) {
            throw ConfigError(p + "/t_min", "must be positive");
        }
    }

    if (auto it = j.find("simulate"); it != j.end()) {
        const std::string p = "/simulate";
        if (!it->is_object()) {
            throw ConfigError(p, "expected an object");
        }
        auto& s = cfg.simulate;
        s.horizon = opt_number(*it, "horizon", p, s.horizon);
        s.sample_dt = opt_number(*it, "sample_dt", p, s.sample_dt);
        s.n_initial = static_cast<int>(opt_integer(*it, "n_initial", p, s.n_initial));
        s.init_box_halfwidth = opt_number(*it, "init_box_halfwidth", p, s.init_box_halfwidth);
        if (auto seed = it->find("rng_seed"); seed != it->end()) {
            if (!seed->is_number_unsigned()) {
                throw ConfigError(p + "/rng_seed", "expected a non-negative integer");
            }
            s.rng_seed = seed->get<std::uint64_t>();
        }
        if (!(s.horizon > 0.0)) {
            throw ConfigError(p + "/horizon", "must be positive");
        }
        if (!(s.sample_dt > 0.0)) {
            throw ConfigError(p + "/sample_dt", "must be positive");
        }
        if (s.n_initial < 1) {
            throw ConfigError(p + "/n_initial", "must be positive");
        }
        if (!(s.init_box_halfwidth >= 0.0)) {
            throw ConfigError(p + "/init_box_halfwidth", "must be non-negative");
        }
    }

    if (auto it = j.find("lqr"); it != j.end() && !it->is_null()) {
        const std::string p = "/lqr";
        if (!it->is_object()) {
            throw ConfigError(p, "expected an object");
        }
        LqrConfig l;
        l.q_scale = get_number(require(*it, "q_scale", p), p + "/q_scale");
        l.r_scale = get_number(require(*it, "r_scale", p), p + "/r_scale");
        if (!(l.q_scale > 0.0) || !(l.r_scale > 0.0)) {
            throw ConfigError(p, "q_scale and r_scale must be positive");
        }
        cfg.lqr = l;
    }
    for (std::size_t i = 0; i < cfg.plants.size(); ++i) {
        if (!cfg.plants[i].k && !cfg.lqr) {
            throw ConfigError("/plants/" + std::to_string(i) + "/K",
                              "missing and no lqr settings are present");
        }
    }

    if (auto it = j.find("reference_period"); it != j.end() && !it->is_null()) {
        cfg.reference_period = get_number(*it, "/reference_period");
    }
    return cfg;
}

Json config_to_json(const NcsConfig& cfg) {
    Json j;
    Json plants = Json::array();
    for (const auto& p : cfg.plants) {
        Json pj;
        pj["A"] = matrix_to_json(p.a);
        pj["B"] = matrix_to_json(p.b);
        if (p.k) {
            pj["K"] = matrix_to_json(*p.k);
        }
        plants.push_back(std::move(pj));
    }
    j["plants"] = std::move(plants);
    j["capacity"] = cfg.capacity;
    const auto& g = cfg.lambda_grid;
    j["lambda_grid"] = {{"lambda_s_min", g.s_min}, {"lambda_s_max", g.s_max}, {"h_s", g.h_s},
                        {"lambda_u_min", g.u_min}, {"lambda_u_max", g.u_max}, {"h_u", g.h_u}};
    j["kappa_floor"] = cfg.kappa_floor;
    j["search"] = {{"max_cycle_len", cfg.search.max_cycle_len},
                   {"max_cycles", cfg.search.max_cycles},
                   {"delta", cfg.search.delta},
                   {"t_min", cfg.search.t_min}};
    const auto& s = cfg.simulate;
    j["simulate"] = {{"horizon", s.horizon},
                     {"sample_dt", s.sample_dt},
                     {"n_initial", s.n_initial},
                     {"init_box_halfwidth", s.init_box_halfwidth},
                     {"rng_seed", s.rng_seed}};
    if (cfg.lqr) {
        j["lqr"] = {{"q_scale", cfg.lqr->q_scale}, {"r_scale", cfg.lqr->r_scale}};
    }
    if (cfg.reference_period) {
        j["reference_period"] = *cfg.reference_period;
    }
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, "cannot open file");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path, std::string("JSON syntax error: ") + e.what());
    }
}

NcsConfig load_config(const std::string& path) {
    return parse_config(read_json_file(path));
}

std::vector<PlantSpec> build_plants(const NcsConfig& cfg) {
    std::vector<PlantSpec> plants;
    plants.reserve(cfg.plants.size());
    for (std::size_t i = 0; i < cfg.plants.size(); ++i) {
        const auto& pc = cfg.plants[i];
        Matrix k;
        if (pc.k) {
            k = *pc.k;
        } else {
            const auto d = pc.a.rows();
            const auto u = pc.b.cols();
            const Matrix q = cfg.lqr->q_scale * Matrix::identity(d);
            const Matrix r = cfg.lqr->r_scale * Matrix::identity(u);
            k = -lqr_gain(pc.a, pc.b, q, r);
        }
        plants.push_back(make_plant(static_cast<int>(i) + 1, pc.a, pc.b, std::move(k)));
    }
    return plants;
}

} // namespace ncs::cli
