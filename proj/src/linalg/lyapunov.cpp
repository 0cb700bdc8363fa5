#include "ncs/linalg.hpp"

#include <string>

namespace ncs::linalg {

Matrix lyap_solve(const Matrix& a, const Matrix& q) {
    if (!a.is_square()) {
        throw DimensionMismatch("lyap_solve: a is not square");
    }
    if (q.rows() != a.rows() || q.cols() != a.cols()) {
        throw DimensionMismatch("lyap_solve: q must match a");
    }
    const std::size_t d = a.rows();
    if (d > kMaxLyapunovDim) {
        throw InvalidArgument("lyap_solve: dimension " + std::to_string(d) +
                              " exceeds the supported maximum of 30");
    }
    if (!is_symmetric(q, 1e-10)) {
        throw InvalidArgument("lyap_solve: q is not symmetric");
    }

    // Unknown P(r,c) sits at index r·d + c. Row (r,c) of the system reads
    // Σ_k a(k,r)·P(k,c) + Σ_k P(r,k)·a(k,c) = -q(r,c).
    const std::size_t dd = d * d;
    Matrix kron(dd, dd);
    Matrix rhs(dd, 1);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const std::size_t row = r * d + c;
            for (std::size_t k = 0; k < d; ++k) {
                kron(row, k * d + c) += a(k, r);
                kron(row, r * d + k) += a(k, c);
            }
            rhs(row, 0) = -q(r, c);
        }
    }
    const Matrix vec_p = solve_linear(kron, rhs);
    Matrix p(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            p(r, c) = vec_p(r * d + c, 0);
        }
    }
    return symmetrize(p);
}

} // namespace ncs::linalg
