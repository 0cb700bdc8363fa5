#include "ncs/cli/generate.hpp"

#include <cmath>
#include <utility>

#include "ncs/cli/artifacts.hpp"

namespace ncs::cli {

bool is_controllable(const Matrix& a, const Matrix& b, double tol_scale) {
    const std::size_t d = a.rows();
    const std::size_t u = b.cols();
    Matrix ctrb(d, d * u);
    Matrix block = b;
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < u; ++c) {
                ctrb(r, k * u + c) = block(r, c);
            }
        }
        block = a * block;
    }
    const double tol = tol_scale * std::max(linalg::frobenius_norm(a), 1.0);
    std::size_t rank = 0;
    const std::size_t cols = ctrb.cols();
    std::vector<bool> used(cols, false);
    for (std::size_t r = 0; r < d; ++r) {
        // Full pivot search over remaining rows and unused columns.
        std::size_t pr = r;
        std::size_t pc = cols;
        double best = 0.0;
        for (std::size_t i = r; i < d; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                if (!used[j] && std::abs(ctrb(i, j)) > best) {
                    best = std::abs(ctrb(i, j));
                    pr = i;
                    pc = j;
                }
            }
        }
        if (pc == cols || best <= tol) {
            break;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            std::swap(ctrb(r, j), ctrb(pr, j));
        }
        used[pc] = true;
        for (std::size_t i = r + 1; i < d; ++i) {
            const double f = ctrb(i, pc) / ctrb(r, pc);
            for (std::size_t j = 0; j < cols; ++j) {
                ctrb(i, j) -= f * ctrb(r, j);
            }
        }
        ++rank;
    }
    return rank == d;
}

NcsConfig generate_config(const GenerateOptions& opts) {
    if (!(opts.capacity > 0 && opts.capacity < opts.n_plants)) {
        throw ConfigError("/capacity", "InvalidCapacity: need 0 < M < N, got M=" +
                                           std::to_string(opts.capacity) + ", N=" +
                                           std::to_string(opts.n_plants));
    }
    if (opts.dim == 0) {
        throw ConfigError("/dim", "must be positive");
    }
    Pcg64 rng(opts.seed);
    NcsConfig cfg;
    cfg.capacity = opts.capacity;
    cfg.lqr = LqrConfig{opts.q_scale, opts.r_scale};
    const std::size_t d = opts.dim;
    const Matrix q = opts.q_scale * Matrix::identity(d);
    const Matrix r = opts.r_scale * Matrix::identity(1);

    for (int i = 0; i < opts.n_plants; ++i) {
        bool done = false;
        for (std::size_t attempt = 0; attempt < opts.max_rejections && !done; ++attempt) {
            Matrix a(d, d);
            Matrix b(d, 1);
            for (std::size_t rr = 0; rr < d; ++rr) {
                for (std::size_t cc = 0; cc < d; ++cc) {
                    a(rr, cc) = rng.uniform(opts.entry_lo, opts.entry_hi);
                }
            }
            for (std::size_t rr = 0; rr < d; ++rr) {
                b(rr, 0) = static_cast<double>(rng.next() >> 63);
            }
            if (!(linalg::spectral_abscissa(a) > 0.0) || !is_controllable(a, b)) {
                continue;
            }
            Matrix k;
            try {
                k = -lqr_gain(a, b, q, r);
            } catch (const Error&) {
                continue;
            }
            cfg.plants.push_back({std::move(a), std::move(b), std::move(k)});
            done = true;
        }
        if (!done) {
            throw GenerationStalled("plant " + std::to_string(i + 1) + ": no valid sample after " +
                                    std::to_string(opts.max_rejections) + " draws");
        }
    }
    return cfg;
}

} // namespace ncs::cli
