#pragma once

#include <complex>
#include <vector>

#include "qec/util.hpp"

namespace qec {

using Vec = std::vector<double>;

// Dense row-major real matrix. Everything in this project is at most
// (4^4 - 1) x (4^4 - 1) = 255 x 255, so simplicity beats blocking.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

Mat mul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
Mat add(const Mat& a, const Mat& b);
Mat sub(const Mat& a, const Mat& b);
Vec mul(const Mat& a, const Vec& v);
double max_abs(const Mat& a);

// Eigendecomposition A = V diag(values) V^T of a symmetric matrix by cyclic
// Jacobi rotations; column j of `vectors` is the eigenvector for values[j].
// Eigenvalues are returned in ascending order.
struct SymEig {
    Vec values;
    Mat vectors;
};
SymEig jacobi_eig(const Mat& a);

// Moore-Penrose pseudo-inverse of a symmetric matrix: eigenvalues with
// |w| <= rel_threshold * max|w| are treated as exact zeros.
Mat pinv_sym(const Mat& a, double rel_threshold = 1e-8);

// Cholesky-based solve/inverse for symmetric positive-definite matrices.
// Returns false if the matrix is not numerically PD.
bool cholesky(const Mat& a, Mat& lower);
bool solve_spd(const Mat& a, const Mat& rhs, Mat& out);
bool inverse_spd(const Mat& a, Mat& out);

// Symmetric inverse used throughout qfisher: Cholesky when PD, otherwise the
// spectral pseudo-inverse (the paper's own treatment of singular covariances).
Mat inv_or_pinv(const Mat& a, double rel_threshold = 1e-8);

// Complex Hermitian counterpart for the dense-matrix oracles and protocol
// measurement simulation (dimension <= 2^7 = 128 in all callers).
using cd = std::complex<double>;

struct CMat {
    int n = 0;
    std::vector<cd> a;

    CMat() = default;
    explicit CMat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim) {}

    cd& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    cd operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static CMat identity(int dim) {
        CMat m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
};

CMat mul(const CMat& a, const CMat& b);
CMat add(const CMat& a, const CMat& b);
CMat adjoint(const CMat& a);
cd trace(const CMat& a);
CMat scale(const CMat& a, cd s);

struct HermEig {
    Vec values;   // ascending
    CMat vectors; // column j pairs with values[j]
};
HermEig herm_eig(const CMat& a);

// Polynomial extrapolation of y(x) to x = 0 (Neville's scheme); used for the
// delta -> 0 regularization cross-checks.
double extrapolate_to_zero(const Vec& x, const Vec& y);

}  // namespace qec
