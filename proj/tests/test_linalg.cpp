#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "qec/linalg.hpp"
#include "qec/rng.hpp"

using namespace qec;

namespace {

Mat random_symmetric(int n, Rng& rng) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = rng.normal();
            a(i, j) = v;
            a(j, i) = v;
        }
    return a;
}

Mat random_spd(int n, Rng& rng) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    Mat a = mul(transpose(g), g);
    for (int i = 0; i < n; ++i) a(i, i) += 0.5;  // keep well conditioned
    return a;
}

}  // namespace

TEST_CASE("matrix multiply and transpose basics") {
    Mat a(2, 3);
    a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
    a(1, 0) = 4; a(1, 1) = 5; a(1, 2) = 6;
    Mat b(3, 2);
    b(0, 0) = 7; b(0, 1) = 8;
    b(1, 0) = 9; b(1, 1) = 10;
    b(2, 0) = 11; b(2, 1) = 12;
    const Mat c = mul(a, b);
    CHECK(c.rows == 2);
    CHECK(c.cols == 2);
    CHECK(c(0, 0) == doctest::Approx(58));
    CHECK(c(0, 1) == doctest::Approx(64));
    CHECK(c(1, 0) == doctest::Approx(139));
    CHECK(c(1, 1) == doctest::Approx(154));
    const Mat at = transpose(a);
    CHECK(at.rows == 3);
    CHECK(at(2, 1) == doctest::Approx(6));
    CHECK(max_abs(sub(transpose(at), a)) == doctest::Approx(0));
}

TEST_CASE("jacobi eigensolver on a known matrix") {
    Mat a(2, 2);
    a(0, 0) = 2; a(0, 1) = 1;
    a(1, 0) = 1; a(1, 1) = 2;
    const SymEig e = jacobi_eig(a);
    REQUIRE(e.values.size() == 2);
    CHECK(e.values[0] == doctest::Approx(1.0));  // ascending order
    CHECK(e.values[1] == doctest::Approx(3.0));
}

TEST_CASE("jacobi eigensolver reconstructs random symmetric matrices") {
    Rng rng(5, 0);
    for (int n : {1, 2, 3, 5, 8}) {
        const Mat a = random_symmetric(n, rng);
        const SymEig e = jacobi_eig(a);
        REQUIRE(static_cast<int>(e.values.size()) == n);
        for (int i = 0; i + 1 < n; ++i) CHECK(e.values[i] <= e.values[i + 1] + 1e-12);
        // A = V diag(values) V^T
        Mat d(n, n);
        for (int i = 0; i < n; ++i) d(i, i) = e.values[i];
        const Mat recon = mul(e.vectors, mul(d, transpose(e.vectors)));
        CHECK(max_abs(sub(recon, a)) < 1e-10);
        // Orthonormal eigenvectors.
        const Mat vtv = mul(transpose(e.vectors), e.vectors);
        CHECK(max_abs(sub(vtv, Mat::identity(n))) < 1e-10);
    }
}

TEST_CASE("solve_spd and inverse_spd invert SPD systems") {
    Rng rng(6, 0);
    for (int n : {1, 2, 4, 7}) {
        const Mat a = random_spd(n, rng);
        Mat b(n, 1);
        for (int i = 0; i < n; ++i) b(i, 0) = rng.normal();
        Mat x;
        REQUIRE(solve_spd(a, b, x));
        CHECK(max_abs(sub(mul(a, x), b)) < 1e-9);
        Mat ainv;
        REQUIRE(inverse_spd(a, ainv));
        CHECK(max_abs(sub(mul(a, ainv), Mat::identity(n))) < 1e-9);
        Mat lower;
        REQUIRE(cholesky(a, lower));
        CHECK(max_abs(sub(mul(lower, transpose(lower)), a)) < 1e-9);
    }
}

TEST_CASE("cholesky rejects indefinite matrices") {
    Mat a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2;
    a(1, 0) = 2; a(1, 1) = 1;  // eigenvalues 3, -1
    Mat lower;
    CHECK_FALSE(cholesky(a, lower));
}

TEST_CASE("pinv_sym satisfies Moore-Penrose identities on singular matrices") {
    Rng rng(7, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4;
        // Rank-2 symmetric matrix.
        Mat g(n, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 2; ++j) g(i, j) = rng.normal();
        const Mat a = mul(g, transpose(g));
        const Mat ap = pinv_sym(a);
        CHECK(max_abs(sub(mul(a, mul(ap, a)), a)) < 1e-9);
        CHECK(max_abs(sub(mul(ap, mul(a, ap)), ap)) < 1e-9);
        CHECK(max_abs(sub(transpose(mul(a, ap)), mul(a, ap))) < 1e-9);
    }
}

TEST_CASE("pinv_sym equals inverse on nonsingular input") {
    Rng rng(8, 0);
    const Mat a = random_spd(3, rng);
    Mat ainv;
    REQUIRE(inverse_spd(a, ainv));
    CHECK(max_abs(sub(pinv_sym(a), ainv)) < 1e-9);
}

TEST_CASE("inv_or_pinv falls back to pseudoinverse") {
    Mat a(2, 2);
    a(0, 0) = 1;  // rank 1
    const Mat ap = inv_or_pinv(a);
    CHECK(ap(0, 0) == doctest::Approx(1.0));
    CHECK(ap(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("complex matrices multiply and trace correctly") {
    CMat a = CMat::identity(2);
    a(0, 1) = {0.0, 1.0};
    const CMat aa = mul(a, adjoint(a));
    CHECK(std::abs(aa(0, 0) - std::complex<double>(2.0, 0.0)) < 1e-12);
    CHECK(std::abs(trace(aa) - std::complex<double>(3.0, 0.0)) < 1e-12);
}

TEST_CASE("hermitian eigensolver reconstructs random matrices") {
    Rng rng(9, 0);
    for (int n : {2, 3, 4}) {
        CMat a(n);
        for (int i = 0; i < n; ++i) {
            a(i, i) = {rng.normal(), 0.0};
            for (int j = 0; j < i; ++j) {
                const std::complex<double> v(rng.normal(), rng.normal());
                a(i, j) = v;
                a(j, i) = std::conj(v);
            }
        }
        const HermEig e = herm_eig(a);
        REQUIRE(static_cast<int>(e.values.size()) == n);
        for (int i = 0; i + 1 < n; ++i) CHECK(e.values[i] <= e.values[i + 1] + 1e-12);
        // A = V diag(values) V^dag
        CMat d(n);
        for (int i = 0; i < n; ++i) d(i, i) = {e.values[i], 0.0};
        const CMat recon = mul(e.vectors, mul(d, adjoint(e.vectors)));
        double diff = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) diff = std::max(diff, std::abs(recon(i, j) - a(i, j)));
        CHECK(diff < 1e-10);
    }
}

TEST_CASE("hermitian eigensolver on sigma_y") {
    CMat y(2);
    y(0, 1) = {0.0, -1.0};
    y(1, 0) = {0.0, 1.0};
    const HermEig e = herm_eig(y);
    CHECK(e.values[0] == doctest::Approx(-1.0));
    CHECK(e.values[1] == doctest::Approx(1.0));
}

TEST_CASE("Richardson extrapolation is exact on polynomials") {
    // y = 3 - 2x + 5x^2 sampled at three points extrapolates to 3 at x=0.
    const std::vector<double> x = {0.1, 0.2, 0.4};
    std::vector<double> y;
    for (double xi : x) y.push_back(3 - 2 * xi + 5 * xi * xi);
    CHECK(extrapolate_to_zero(x, y) == doctest::Approx(3.0).epsilon(1e-12));
}
