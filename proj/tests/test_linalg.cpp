#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "ncs/linalg.hpp"
#include "support.hpp"

using namespace ncs;
using namespace ncs::linalg;
using testsupport::diag;

TEST_CASE("matrix construction and arithmetic") {
    Matrix a{{1, 2}, {3, 4}};
    Matrix b{{0, 1}, {1, 0}};
    CHECK(a.rows() == 2);
    CHECK(a.cols() == 2);
    CHECK((a * b) == Matrix{{2, 1}, {4, 3}});
    CHECK((a + b) == Matrix{{1, 3}, {4, 4}});
    CHECK((a - b) == Matrix{{1, 1}, {2, 4}});
    CHECK(a.transpose() == Matrix{{1, 3}, {2, 4}});
    CHECK((2.0 * a)(1, 1) == 8.0);
    const Vector x{1.0, -1.0};
    const Vector y = a * x;
    CHECK(y[0] == -1.0);
    CHECK(y[1] == -1.0);
    CHECK(Matrix::identity(3)(2, 2) == 1.0);
    CHECK(Matrix::identity(3)(0, 2) == 0.0);
}

TEST_CASE("shape errors") {
    Matrix a(2, 3);
    Matrix b(2, 3);
    CHECK_THROWS_AS((void)(a * b), DimensionMismatch);
    CHECK_THROWS_AS((void)(a + Matrix(3, 2)), DimensionMismatch);
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), DimensionMismatch);
    CHECK_THROWS_AS(Matrix(1, 1, {std::nan("")}), InvalidArgument);
}

TEST_CASE("norms and quadratic forms") {
    Matrix a{{3, 0}, {4, 0}};
    CHECK(frobenius_norm(a) == doctest::Approx(5.0));
    CHECK(norm1(a) == doctest::Approx(7.0));
    CHECK(norm2(Vector{3.0, 4.0}) == doctest::Approx(5.0));
    Matrix p{{2, 1}, {1, 3}};
    CHECK(quadratic_form(p, Vector{1.0, 1.0}) == doctest::Approx(7.0));
    CHECK(is_symmetric(p));
    CHECK_FALSE(is_symmetric(Matrix{{1, 2}, {0, 1}}));
}

TEST_CASE("solve_linear and inverse") {
    Matrix a{{4, -2, 1}, {-2, 4, -2}, {1, -2, 4}};
    Matrix b{{11}, {-16}, {17}};
    const Matrix x = solve_linear(a, b);
    CHECK(x(0, 0) == doctest::Approx(1.0));
    CHECK(x(1, 0) == doctest::Approx(-2.0));
    CHECK(x(2, 0) == doctest::Approx(3.0));
    const Matrix inv = inverse(a);
    CHECK(frobenius_norm(a * inv - Matrix::identity(3)) < 1e-13);
    CHECK_THROWS_AS((void)solve_linear(Matrix{{1, 2}, {2, 4}}, Matrix{{1}, {2}}), SingularMatrix);
}

TEST_CASE("cholesky") {
    Matrix a{{4, 2}, {2, 3}};
    const Matrix l = cholesky(a);
    CHECK(l(0, 0) == doctest::Approx(2.0));
    CHECK(l(1, 0) == doctest::Approx(1.0));
    CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(l(0, 1) == 0.0);
    CHECK(frobenius_norm(l * l.transpose() - a) < 1e-14);
    CHECK_THROWS_AS((void)cholesky(Matrix{{1, 2}, {2, 1}}), NotPositiveDefinite);
    CHECK(is_positive_definite(a));
    CHECK_FALSE(is_positive_definite(Matrix{{1, 0}, {0, -1}}));
}

TEST_CASE("symmetric eigendecomposition") {
    const auto e = sym_eig(Matrix{{2, 1}, {1, 2}});
    CHECK(e.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(3.0));
    CHECK(lambda_min(Matrix{{2, 1}, {1, 2}}) == doctest::Approx(1.0));
    CHECK(lambda_max(Matrix{{2, 1}, {1, 2}}) == doctest::Approx(3.0));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m = testsupport::random_matrix(5, 5, rng);
        m = symmetrize(m);
        const auto d = sym_eig(m);
        // A·V = V·Λ
        const Matrix lam = Matrix::diagonal(d.eigenvalues);
        CHECK(frobenius_norm(m * d.eigenvectors - d.eigenvectors * lam) < 1e-11);
        CHECK(std::is_sorted(d.eigenvalues.begin(), d.eigenvalues.end()));
    }
}

TEST_CASE("general eigenvalues") {
    SUBCASE("companion matrix with roots 1, 2, 3") {
        const auto ev = eigenvalues(Matrix{{6, -11, 6}, {1, 0, 0}, {0, 1, 0}});
        REQUIRE(ev.size() == 3);
        CHECK(ev[0].real() == doctest::Approx(1.0));
        CHECK(ev[1].real() == doctest::Approx(2.0));
        CHECK(ev[2].real() == doctest::Approx(3.0));
        for (const auto& z : ev) {
            CHECK(std::abs(z.imag()) < 1e-12);
        }
    }
    SUBCASE("rotation generator has eigenvalues ±i") {
        const auto ev = eigenvalues(Matrix{{0, -1}, {1, 0}});
        REQUIRE(ev.size() == 2);
        CHECK(std::abs(ev[0].real()) < 1e-14);
        CHECK(ev[0].imag() == doctest::Approx(-1.0));
        CHECK(ev[1].imag() == doctest::Approx(1.0));
    }
    SUBCASE("trace and determinant agree on random 6x6") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix a = testsupport::random_matrix(6, 6, rng, -3, 3);
            const auto ev = eigenvalues(a);
            std::complex<double> sum = 0.0;
            for (const auto& z : ev) {
                sum += z;
            }
            double trace = 0.0;
            for (std::size_t i = 0; i < 6; ++i) {
                trace += a(i, i);
            }
            CHECK(sum.real() == doctest::Approx(trace).epsilon(1e-10));
            CHECK(std::abs(sum.imag()) < 1e-9);
        }
    }
    SUBCASE("abscissa and Hurwitz test") {
        CHECK(spectral_abscissa(diag({-1.0, -3.0})) == doctest::Approx(-1.0));
        CHECK(is_hurwitz(diag({-1.0, -3.0})));
        CHECK_FALSE(is_hurwitz(diag({-1.0, 0.0})));
    }
}

TEST_CASE("matrix exponential") {
    SUBCASE("diagonal") {
        const Matrix e = expm(diag({1.0, -2.0}), 0.5);
        CHECK(e(0, 0) == doctest::Approx(std::exp(0.5)).epsilon(1e-15));
        CHECK(e(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
        CHECK(e(0, 1) == 0.0);
    }
    SUBCASE("nilpotent") {
        const Matrix e = expm(Matrix{{0, 1}, {0, 0}}, 3.0);
        CHECK(e(0, 1) == doctest::Approx(3.0));
        CHECK(e(0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("rotation") {
        const Matrix e = expm(Matrix{{0, -1}, {1, 0}}, 1.0);
        CHECK(e(0, 0) == doctest::Approx(std::cos(1.0)).epsilon(1e-14));
        CHECK(e(1, 0) == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
    }
    SUBCASE("large norm needs squaring") {
        const Matrix e = expm(Matrix{{-50, 40}, {0, -60}}, 1.0);
        // Upper-triangular closed form: off-diagonal 40(e^{-50} - e^{-60})/10.
        CHECK(e(0, 0) == doctest::Approx(std::exp(-50.0)).epsilon(1e-12));
        CHECK(e(0, 1) == doctest::Approx(4.0 * (std::exp(-50.0) - std::exp(-60.0))).epsilon(1e-10));
    }
    SUBCASE("inverse pair") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix a = testsupport::random_matrix(4, 4, rng, -2, 2);
            CHECK(frobenius_norm(expm(a) * expm(-a) - Matrix::identity(4)) < 1e-12);
        }
    }
    SUBCASE("zero matrix") {
        CHECK(expm(Matrix(3, 3)) == Matrix::identity(3));
    }
}

TEST_CASE("Lyapunov solver") {
    SUBCASE("closed form 2x2") {
        const Matrix p = lyap_solve(Matrix{{0, 1}, {-2, -3}}, Matrix::identity(2));
        CHECK(p(0, 0) == doctest::Approx(1.25));
        CHECK(p(0, 1) == doctest::Approx(0.25));
        CHECK(p(1, 0) == doctest::Approx(0.25));
        CHECK(p(1, 1) == doctest::Approx(0.25));
    }
    SUBCASE("scalar") {
        const Matrix p = lyap_solve(Matrix{{-2.0}}, Matrix{{1.0}});
        CHECK(p(0, 0) == doctest::Approx(0.25));
    }
    SUBCASE("random residuals") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 50; ++trial) {
            const Matrix a = testsupport::random_hurwitz(5, rng);
            const Matrix p = lyap_solve(a, Matrix::identity(5));
            CHECK(testsupport::lyap_residual(a, p, Matrix::identity(5)) < 1e-8);
            CHECK(is_positive_definite(p));
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS((void)lyap_solve(Matrix(31, 31), Matrix(31, 31)), InvalidArgument);
        CHECK_THROWS_AS((void)lyap_solve(Matrix(2, 2), Matrix{{1, 2}, {0, 1}}), InvalidArgument);
        CHECK_THROWS_AS((void)lyap_solve(Matrix(2, 3), Matrix(2, 3)), DimensionMismatch);
    }
}
