#pragma once

#include <cstdint>

#include "ncs/cli/config.hpp"

namespace ncs::cli {

class GenerationStalled : public Error {
public:
    using Error::Error;
};

struct GenerateOptions {
    int n_plants = 2;
    int capacity = 1;
    std::uint64_t seed = 1;
    std::size_t dim = 2;
    double entry_lo = -2.0;
    double entry_hi = 2.0;
    double q_scale = 5.0;
    double r_scale = 1.0;
    std::size_t max_rejections = 10000;
};

/// rank [B, AB, ..., A^{d-1}B] = d by Gaussian elimination with full
/// pivoting; pivots below tol_scale·max(‖A‖_F, 1) count as zero.
[[nodiscard]] bool is_controllable(const Matrix& a, const Matrix& b, double tol_scale = 1e-9);

/// Random unstable, controllable plants with LQR gains filled in.
[[nodiscard]] NcsConfig generate_config(const GenerateOptions& opts);

} // namespace ncs::cli
