#include "ncs/linalg.hpp"

#include <array>
#include <cmath>

namespace ncs::linalg {

namespace {

// Padé(13,13) coefficients and the 1-norm bound θ₁₃ from Higham (2005).
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

} // namespace

Matrix expm(const Matrix& a, double t) {
    if (!a.is_square()) {
        throw DimensionMismatch("expm: matrix is not square");
    }
    if (!std::isfinite(t)) {
        throw InvalidArgument("expm: duration must be finite");
    }
    const std::size_t n = a.rows();
    Matrix x = a * t;
    const double nrm = norm1(x);
    if (nrm == 0.0) {
        return Matrix::identity(n);
    }

    int squarings = 0;
    if (nrm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
        x *= std::ldexp(1.0, -squarings);
    }

    const Matrix ident = Matrix::identity(n);
    const Matrix x2 = x * x;
    const Matrix x4 = x2 * x2;
    const Matrix x6 = x4 * x2;
    const auto& b = kPade13;

    Matrix u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2);
    u_inner += b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * ident;
    const Matrix u = x * u_inner;

    Matrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2);
    v += b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * ident;

    Matrix r = solve_linear(v - u, v + u);
    for (int i = 0; i < squarings; ++i) {
        r = r * r;
    }
    return r;
}

} // namespace ncs::linalg
