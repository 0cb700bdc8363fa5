#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncs/certificates.hpp"
#include "ncs/cycle_search.hpp"

namespace ncs::cli {

using Json = nlohmann::ordered_json;

/// A malformed or inconsistent input file. field() is a JSON-pointer-like
/// path to the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct PlantConfig {
    Matrix a;
    Matrix b;
    std::optional<Matrix> k;
};

struct SimulateConfig {
    double horizon = 150.0;
    double sample_dt = 0.05;
    int n_initial = 10;
    double init_box_halfwidth = 10.0;
    std::uint64_t rng_seed = 1;
};

struct LqrConfig {
    double q_scale = 5.0;
    double r_scale = 1.0;
};

struct NcsConfig {
    std::vector<PlantConfig> plants;
    int capacity = 1;
    LambdaGrid lambda_grid;
    double kappa_floor = 0.01;
    SearchBudget search;
    SimulateConfig simulate;
    std::optional<LqrConfig> lqr;
    std::optional<double> reference_period;

    [[nodiscard]] int n_plants() const noexcept { return static_cast<int>(plants.size()); }
};

[[nodiscard]] Json matrix_to_json(const Matrix& m);
[[nodiscard]] Matrix matrix_from_json(const Json& j, const std::string& field);

[[nodiscard]] NcsConfig parse_config(const Json& j);
[[nodiscard]] Json config_to_json(const NcsConfig& cfg);
[[nodiscard]] NcsConfig load_config(const std::string& path);

/// Reads and parses a JSON file, mapping I/O and syntax failures to
/// ConfigError.
[[nodiscard]] Json read_json_file(const std::string& path);

/// Plant specs with missing gains filled by LQR (u = Kx with K = -K_lqr).
[[nodiscard]] std::vector<PlantSpec> build_plants(const NcsConfig& cfg);

} // namespace ncs::cli
