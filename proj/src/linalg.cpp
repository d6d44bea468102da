#include "qec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qec {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw InfeasibleError(msg);
}

}  // namespace

Mat mul(const Mat& a, const Mat& b) {
    require(a.cols == b.rows, "mul: shape mismatch");
    Mat out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            double v = a(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) out(i, j) += v * b(k, j);
        }
    }
    return out;
}

Mat transpose(const Mat& a) {
    Mat out(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) out(j, i) = a(i, j);
    return out;
}

Mat add(const Mat& a, const Mat& b) {
    require(a.rows == b.rows && a.cols == b.cols, "add: shape mismatch");
    Mat out = a;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += b.a[i];
    return out;
}

Mat sub(const Mat& a, const Mat& b) {
    require(a.rows == b.rows && a.cols == b.cols, "sub: shape mismatch");
    Mat out = a;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] -= b.a[i];
    return out;
}

Vec mul(const Mat& a, const Vec& v) {
    require(a.cols == static_cast<int>(v.size()), "mul: vector size mismatch");
    Vec out(static_cast<std::size_t>(a.rows), 0.0);
    for (int i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols; ++j) s += a(i, j) * v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

double max_abs(const Mat& a) {
    double m = 0.0;
    for (double v : a.a) m = std::max(m, std::abs(v));
    return m;
}

SymEig jacobi_eig(const Mat& a) {
    require(a.rows == a.cols, "jacobi_eig: square matrix required");
    const int n = a.rows;
    Mat d = a;
    Mat v = Mat::identity(n);
    if (n == 0) return {Vec{}, v};

    double norm = 0.0;
    for (double x : d.a) norm += x * x;
    norm = std::sqrt(norm);
    const double tol = (norm == 0.0 ? 1.0 : norm) * 1e-15;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += d(p, q) * d(p, q);
        if (std::sqrt(2.0 * off) <= tol) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = d(p, q);
                if (std::abs(apq) <= tol * 1e-2) continue;
                double theta = (d(q, q) - d(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (int i = 0; i < n; ++i) {
                    double dip = d(i, p), diq = d(i, q);
                    d(i, p) = c * dip - s * diq;
                    d(i, q) = s * dip + c * diq;
                }
                for (int i = 0; i < n; ++i) {
                    double dpi = d(p, i), dqi = d(q, i);
                    d(p, i) = c * dpi - s * dqi;
                    d(q, i) = s * dpi + c * dqi;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return d(i, i) < d(j, j); });

    SymEig out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        int src = order[static_cast<std::size_t>(j)];
        out.values[static_cast<std::size_t>(j)] = d(src, src);
        for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, src);
    }
    return out;
}

Mat pinv_sym(const Mat& a, double rel_threshold) {
    SymEig e = jacobi_eig(a);
    const int n = a.rows;
    double wmax = 0.0;
    for (double w : e.values) wmax = std::max(wmax, std::abs(w));
    double cut = wmax * rel_threshold;
    Mat out(n, n);
    for (int k = 0; k < n; ++k) {
        double w = e.values[static_cast<std::size_t>(k)];
        if (std::abs(w) <= cut) continue;
        double inv = 1.0 / w;
        for (int i = 0; i < n; ++i) {
            double vik = e.vectors(i, k) * inv;
            if (vik == 0.0) continue;
            for (int j = 0; j < n; ++j) out(i, j) += vik * e.vectors(j, k);
        }
    }
    return out;
}

bool cholesky(const Mat& a, Mat& lower) {
    if (a.rows != a.cols) return false;
    const int n = a.rows;
    // Reject pivots at rounding level relative to the matrix scale: a
    // singular PSD matrix otherwise passes with garbage 1/sqrt(tiny) factors.
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
    const double floor = scale * 1e-12;
    lower = Mat(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
            if (i == j) {
                if (s <= floor || !std::isfinite(s)) return false;
                lower(i, i) = std::sqrt(s);
            } else {
                lower(i, j) = s / lower(j, j);
            }
        }
    }
    return true;
}

bool solve_spd(const Mat& a, const Mat& rhs, Mat& out) {
    Mat l;
    if (!cholesky(a, l)) return false;
    const int n = a.rows;
    out = rhs;
    // Forward substitution L y = rhs.
    for (int col = 0; col < rhs.cols; ++col) {
        for (int i = 0; i < n; ++i) {
            double s = out(i, col);
            for (int k = 0; k < i; ++k) s -= l(i, k) * out(k, col);
            out(i, col) = s / l(i, i);
        }
        // Back substitution L^T x = y.
        for (int i = n - 1; i >= 0; --i) {
            double s = out(i, col);
            for (int k = i + 1; k < n; ++k) s -= l(k, i) * out(k, col);
            out(i, col) = s / l(i, i);
        }
    }
    return true;
}

bool inverse_spd(const Mat& a, Mat& out) {
    return solve_spd(a, Mat::identity(a.rows), out);
}

Mat inv_or_pinv(const Mat& a, double rel_threshold) {
    Mat out;
    if (inverse_spd(a, out)) return out;
    return pinv_sym(a, rel_threshold);
}

CMat mul(const CMat& a, const CMat& b) {
    require(a.n == b.n, "cmul: shape mismatch");
    CMat out(a.n);
    for (int i = 0; i < a.n; ++i) {
        for (int k = 0; k < a.n; ++k) {
            cd v = a(i, k);
            if (v == cd(0.0, 0.0)) continue;
            for (int j = 0; j < a.n; ++j) out(i, j) += v * b(k, j);
        }
    }
    return out;
}

CMat add(const CMat& a, const CMat& b) {
    require(a.n == b.n, "cadd: shape mismatch");
    CMat out = a;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += b.a[i];
    return out;
}

CMat adjoint(const CMat& a) {
    CMat out(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

cd trace(const CMat& a) {
    cd t = 0.0;
    for (int i = 0; i < a.n; ++i) t += a(i, i);
    return t;
}

CMat scale(const CMat& a, cd s) {
    CMat out = a;
    for (auto& v : out.a) v *= s;
    return out;
}

HermEig herm_eig(const CMat& a) {
    const int n = a.n;
    CMat d = a;
    CMat v = CMat::identity(n);
    if (n == 0) return {Vec{}, v};

    double norm = 0.0;
    for (const cd& x : d.a) norm += std::norm(x);
    norm = std::sqrt(norm);
    const double tol = (norm == 0.0 ? 1.0 : norm) * 1e-15;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(d(p, q));
        if (std::sqrt(2.0 * off) <= tol) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                cd apq = d(p, q);
                double mag = std::abs(apq);
                if (mag <= tol * 1e-2) continue;
                // Phase e^{i phi} of the pivot, then a real Jacobi rotation.
                cd phase = apq / mag;
                double app = d(p, p).real();
                double aqq = d(q, q).real();
                double theta = (aqq - app) / (2.0 * mag);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                // Columns transform by U: col_p' = c*col_p - s*conj(phase)*col_q,
                // col_q' = s*phase*col_p + c*col_q.
                cd sp = s * phase;
                cd spc = s * std::conj(phase);
                for (int i = 0; i < n; ++i) {
                    cd dip = d(i, p), diq = d(i, q);
                    d(i, p) = c * dip - spc * diq;
                    d(i, q) = sp * dip + c * diq;
                }
                for (int i = 0; i < n; ++i) {
                    cd dpi = d(p, i), dqi = d(q, i);
                    d(p, i) = c * dpi - sp * dqi;
                    d(q, i) = spc * dpi + c * dqi;
                }
                for (int i = 0; i < n; ++i) {
                    cd vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - spc * viq;
                    v(i, q) = sp * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return d(i, i).real() < d(j, j).real();
    });

    HermEig out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors = CMat(n);
    for (int j = 0; j < n; ++j) {
        int src = order[static_cast<std::size_t>(j)];
        out.values[static_cast<std::size_t>(j)] = d(src, src).real();
        for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, src);
    }
    return out;
}

double extrapolate_to_zero(const Vec& x, const Vec& y) {
    require(x.size() == y.size() && !x.empty(), "extrapolate: bad input");
    Vec p = y;
    const std::size_t n = x.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            // Neville update evaluated at 0.
            p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
        }
    }
    return p[0];
}

}  // namespace qec
