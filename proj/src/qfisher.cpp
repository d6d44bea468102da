#include "qec/qfisher.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>

#include "qec/codes.hpp"
#include "qec/fisher.hpp"
#include "qec/util.hpp"

namespace qec {

namespace {

int bloch_dim(int k) { return (1 << (2 * k)) - 1; }

}  // namespace

BlochState bloch_from_state(const std::vector<std::complex<double>>& amplitudes) {
    int k = 0;
    while ((std::size_t(1) << k) < amplitudes.size()) ++k;
    if ((std::size_t(1) << k) != amplitudes.size())
        throw ConfigError("amplitude vector length is not a power of two");
    double norm2 = 0.0;
    for (const auto& a : amplitudes) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > 1e-10)
        throw ConfigError("amplitude vector is not normalized");

    BlochState out;
    out.k = k;
    out.amplitudes = amplitudes;
    out.theta.assign(bloch_dim(k), 0.0);
    const std::uint32_t mask = (1u << k) - 1;
    for (std::uint32_t j = 1; j <= static_cast<std::uint32_t>(bloch_dim(k)); ++j) {
        const std::uint32_t x = j & mask, z = j >> k;
        // i^{|x&z|} phase of P(x,z) = i^{|x&z|} X^x Z^z.
        const int ph = std::popcount(x & z) & 3;
        std::complex<double> acc = 0.0;
        for (std::uint32_t c = 0; c < amplitudes.size(); ++c) {
            std::complex<double> t = std::conj(amplitudes[c ^ x]) * amplitudes[c];
            if (std::popcount(z & c) & 1) t = -t;
            acc += t;
        }
        static const std::complex<double> kI(0.0, 1.0);
        std::complex<double> phase = 1.0;
        for (int q = 0; q < ph; ++q) phase *= kI;
        out.theta[j - 1] = (phase * acc).real();
    }
    return out;
}

BlochState bloch_from_theta(const Vec& theta, int k) {
    if (static_cast<int>(theta.size()) != bloch_dim(k))
        throw ConfigError("Bloch vector length does not match k");
    BlochState out;
    out.k = k;
    out.theta = theta;
    return out;
}

int anticommutator_sign(ClassLabel j, ClassLabel l, int k) {
    const std::uint32_t mask = (1u << k) - 1;
    const std::uint32_t x1 = j & mask, z1 = j >> k;
    const std::uint32_t x2 = l & mask, z2 = l >> k;
    if (std::popcount((x1 & z2) ^ (z1 & x2)) & 1) return 0;
    const int a1 = std::popcount(x1 & z1);
    const int a2 = std::popcount(x2 & z2);
    const int a12 = std::popcount((x1 ^ x2) & (z1 ^ z2));
    // P(x,z) = i^{|x&z|} X^x Z^z gives P_j P_l = i^{a1+a2-a12} (-1)^{|z1&x2|} P_{j^l};
    // the exponent is even whenever the labels commute.
    int s = (((a1 + a2 - a12) % 4 + 4) % 4 == 0) ? 1 : -1;
    if (std::popcount(z1 & x2) & 1) s = -s;
    return s;
}

Mat covariance_from_bloch(const Vec& v, int k) {
    const int n = bloch_dim(k);
    if (static_cast<int>(v.size()) != n)
        throw ConfigError("Bloch vector length does not match k");
    Mat C(n, n);
    for (int j = 1; j <= n; ++j) {
        C(j - 1, j - 1) = 1.0 - v[j - 1] * v[j - 1];
        for (int l = j + 1; l <= n; ++l) {
            const int s = anticommutator_sign(static_cast<ClassLabel>(j),
                                              static_cast<ClassLabel>(l), k);
            double a = 0.0;
            if (s != 0) a = s * v[(j ^ l) - 1];
            const double c = a - v[j - 1] * v[l - 1];
            C(j - 1, l - 1) = c;
            C(l - 1, j - 1) = c;
        }
    }
    return C;
}

Mat covariance(const BlochState& state, double delta) {
    if (delta < 0.0 || delta >= 1.0) throw ConfigError("covariance: delta outside [0,1)");
    if (delta == 0.0) return covariance_from_bloch(state.theta, state.k);
    Vec v = state.theta;
    for (double& t : v) t *= (1.0 - delta);
    return covariance_from_bloch(v, state.k);
}

namespace {

Mat regularized_inverse(const Vec& bloch, int k, double delta) {
    if (delta < 0.0 || delta >= 1.0) throw ConfigError("delta outside [0,1)");
    if (delta == 0.0) return inv_or_pinv(covariance_from_bloch(bloch, k));
    Vec v = bloch;
    for (double& t : v) t *= (1.0 - delta);
    return inv_or_pinv(covariance_from_bloch(v, k));
}

}  // namespace

Mat qfim_noisy(const Mat& A, const Vec& c, const BlochState& state, double delta) {
    const int n = bloch_dim(state.k);
    if (A.rows != n || A.cols != n || static_cast<int>(c.size()) != n)
        throw ConfigError("qfim_noisy: transfer map has wrong dimensions");
    Vec v = mul(A, state.theta);
    for (int j = 0; j < n; ++j) v[j] += c[j];
    for (int j = 0; j < n; ++j)
        if (std::abs(v[j]) > 1.0 + 1e-9)
            throw ConfigError("qfim_noisy: output Bloch component exceeds 1");
    const Mat Minv = regularized_inverse(v, state.k, delta);
    return mul(transpose(A), mul(Minv, A));
}

Mat qfim_pauli(const Vec& lambda, const BlochState& state, double delta) {
    const int n = bloch_dim(state.k);
    if (static_cast<int>(lambda.size()) != n)
        throw ConfigError("qfim_pauli: contraction vector has wrong length");
    Vec v(n);
    for (int j = 0; j < n; ++j) v[j] = lambda[j] * state.theta[j];
    const Mat Minv = regularized_inverse(v, state.k, delta);
    Mat J(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) J(a, b) = lambda[a] * Minv(a, b) * lambda[b];
    return J;
}

Mat qfim_syndrome(const SyndromeTable& table, const BlochState& state, double delta) {
    if (table.k != state.k)
        throw ConfigError("qfim_syndrome: table and state have different k");
    const int n = bloch_dim(state.k);
    Mat J(n, n);
    for (const auto& entry : table.entries) {
        double p = 0.0;
        for (const auto& [label, mass] : entry.classes) p += mass;
        if (p <= 0.0) continue;
        const Vec lambda = lambda_vector_of_entry(entry, table.k);
        Vec v(n);
        for (int j = 0; j < n; ++j) v[j] = lambda[j] * state.theta[j];
        const Mat Minv = regularized_inverse(v, state.k, delta);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                J(a, b) += p * lambda[a] * Minv(a, b) * lambda[b];
    }
    if (table.excluded_mass > 0.0) {
        const Mat Minv = regularized_inverse(state.theta, state.k, delta);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) J(a, b) += table.excluded_mass * Minv(a, b);
    }
    return J;
}

double qfi_entry(const Mat& J, ClassLabel i) {
    if (i == 0 || static_cast<int>(i) > J.rows)
        throw ConfigError("qfi_entry: label out of range");
    const Mat Jinv = inv_or_pinv(J);
    const double d = Jinv(static_cast<int>(i) - 1, static_cast<int>(i) - 1);
    if (d <= 0.0) throw InfeasibleError("qfi_entry: nonpositive variance entry");
    return 1.0 / d;
}

double eps_qsynd(double J_theta_i, double theta_i) {
    return fisher_f_inv(theta_i, J_theta_i);
}

double delta_contribution(const Vec& lambda, const BlochState& state, ClassLabel i,
                          double delta) {
    const int n = bloch_dim(state.k);
    if (static_cast<int>(lambda.size()) != n)
        throw ConfigError("delta_contribution: contraction vector has wrong length");
    if (i == 0 || static_cast<int>(i) > n)
        throw ConfigError("delta_contribution: label out of range");
    Vec theta = state.theta;
    if (delta > 0.0)
        for (double& t : theta) t *= (1.0 - delta);
    const Mat C = covariance_from_bloch(theta, state.k);
    Vec v(n);
    for (int j = 0; j < n; ++j) v[j] = lambda[j] * theta[j];
    const Mat Minv = inv_or_pinv(covariance_from_bloch(v, state.k));
    const int ii = static_cast<int>(i) - 1;
    Vec u(n);
    for (int j = 0; j < n; ++j) u[j] = lambda[j] * C(j, ii);
    const Vec x = mul(Minv, u);
    double q = 0.0;
    for (int j = 0; j < n; ++j) q += u[j] * x[j];
    return (C(ii, ii) - q) / 4.0;
}

Mat schur_complement_minus(const Mat& C, const std::vector<int>& plus,
                           const std::vector<int>& minus) {
    const int np = static_cast<int>(plus.size());
    const int nm = static_cast<int>(minus.size());
    Mat Cpp(np, np), Cmp(nm, np), Cmm(nm, nm);
    for (int a = 0; a < np; ++a)
        for (int b = 0; b < np; ++b) Cpp(a, b) = C(plus[a], plus[b]);
    for (int a = 0; a < nm; ++a)
        for (int b = 0; b < np; ++b) Cmp(a, b) = C(minus[a], plus[b]);
    for (int a = 0; a < nm; ++a)
        for (int b = 0; b < nm; ++b) Cmm(a, b) = C(minus[a], minus[b]);
    const Mat P = pinv_sym(Cpp);
    const Mat T = mul(Cmp, mul(P, transpose(Cmp)));
    return sub(Cmm, T);
}

double delta_contribution_projector(const BlochState& state, ClassLabel Q,
                                    ClassLabel i) {
    const int n = bloch_dim(state.k);
    if (!label_anticommutes(i, Q, state.k)) return 0.0;
    std::vector<int> plus, minus;
    plus.reserve(n);
    minus.reserve(n);
    int ti = -1;
    for (int j = 1; j <= n; ++j) {
        if (label_anticommutes(static_cast<ClassLabel>(j), Q, state.k)) {
            if (static_cast<ClassLabel>(j) == i) ti = static_cast<int>(minus.size());
            minus.push_back(j - 1);
        } else {
            plus.push_back(j - 1);
        }
    }
    const Mat C = covariance_from_bloch(state.theta, state.k);
    // Only one Schur entry is needed: S_ii = C_ii - C_{i,+} pinv(C_pp) C_{+,i}.
    const int np = static_cast<int>(plus.size());
    Mat Cpp(np, np);
    for (int a = 0; a < np; ++a)
        for (int b = 0; b < np; ++b) Cpp(a, b) = C(plus[a], plus[b]);
    const Mat P = pinv_sym(Cpp);
    const int ii = minus[ti];
    Vec u(np);
    for (int a = 0; a < np; ++a) u[a] = C(ii, plus[a]);
    const Vec x = mul(P, u);
    double q = 0.0;
    for (int a = 0; a < np; ++a) q += u[a] * x[a];
    return (C(ii, ii) - q) / 4.0;
}

Vec limit_channel_lambda(const ClassifiedChannel& ch, int k) {
    const int n = bloch_dim(k);
    double tot = 0.0;
    for (const auto& [label, coeff] : ch.class_coeffs) tot += coeff;
    Vec lambda(n, 0.0);
    if (tot <= 0.0) return lambda;
    for (int j = 1; j <= n; ++j) {
        double acc = 0.0;
        for (const auto& [label, coeff] : ch.class_coeffs) {
            const double sgn =
                label_anticommutes(label, static_cast<ClassLabel>(j), k) ? -1.0 : 1.0;
            acc += sgn * coeff;
        }
        lambda[j - 1] = acc / tot;
    }
    return lambda;
}

bool lemma1_form(const ClassifiedChannel& ch, ClassLabel target, int k,
                 ClassLabel* q_out) {
    if (ch.class_coeffs.size() != 2) return false;
    const double a = ch.class_coeffs[0].second;
    const double b = ch.class_coeffs[1].second;
    if (std::abs(a - b) > 1e-9 * (std::abs(a) + std::abs(b))) return false;
    const ClassLabel q = ch.class_coeffs[0].first ^ ch.class_coeffs[1].first;
    if (!label_anticommutes(q, target, k)) return false;
    if (q_out) *q_out = q;
    return true;
}

double limit_ratio_quantum(const SyndromeClassification& cls, const BlochState& state,
                           ClassLabel target) {
    if (cls.k != state.k)
        throw ConfigError("limit_ratio_quantum: classification and state disagree on k");
    double num = 0.0, den = 0.0;
    // Delta of a two-element-coset channel depends only on the coset
    // difference Q (the overall frame is a sign pattern the quadratic form
    // cancels), so such channels are grouped by Q and share one Schur entry.
    std::map<ClassLabel, double> coset_weight;
    for (const auto& ch : cls.theta1) {
        double c = 0.0;
        for (const auto& [label, coeff] : ch.class_coeffs) c += coeff;
        den += c * limit_channel_eps(ch, target, cls.k);
        ClassLabel q = 0;
        if (lemma1_form(ch, target, cls.k, &q)) {
            coset_weight[q] += c;
        } else {
            const Vec lambda = limit_channel_lambda(ch, cls.k);
            num += c * delta_contribution(lambda, state, target, 0.0);
        }
    }
    for (const auto& [q, w] : coset_weight)
        num += w * delta_contribution_projector(state, q, target);
    for (const auto& ch : cls.theta_eta) {
        num += ch.minority_coeff;
        den += ch.minority_coeff;
    }
    if (den <= 0.0)
        throw InfeasibleError(
            "limit_ratio_quantum: no syndromes contribute at leading order");
    return num / den;
}

SimplifiedStateResult simplified_state_suite(const BlochState& state, double p,
                                             ClassLabel Q, ClassLabel i) {
    const int n = bloch_dim(state.k);
    if (p < 0.0 || p >= 1.0) throw ConfigError("simplified_state_suite: p outside [0,1)");
    if (!label_anticommutes(Q, i, state.k))
        throw ConfigError("simplified_state_suite: Q must anticommute with the target");

    SimplifiedStateResult out;
    int ti = -1;
    for (int j = 1; j <= n; ++j) {
        if (label_anticommutes(static_cast<ClassLabel>(j), Q, state.k)) {
            if (static_cast<ClassLabel>(j) == i) ti = static_cast<int>(out.j_minus.size());
            out.j_minus.push_back(j - 1);
        } else {
            out.j_plus.push_back(j - 1);
        }
    }

    const Mat C = covariance_from_bloch(state.theta, state.k);
    out.schur = schur_complement_minus(C, out.j_plus, out.j_minus);
    out.variance_bound = out.schur(ti, ti);

    out.j_synd_inverse = C;
    const double w = p / (1.0 - p);
    for (std::size_t a = 0; a < out.j_minus.size(); ++a)
        for (std::size_t b = 0; b < out.j_minus.size(); ++b)
            out.j_synd_inverse(out.j_minus[a], out.j_minus[b]) +=
                w * out.schur(static_cast<int>(a), static_cast<int>(b));

    // O_i = e_i^T C_{-+} pinv(C_{++}) P_+, expressed over all labels.
    const int np = static_cast<int>(out.j_plus.size());
    Mat Cpp(np, np);
    for (int a = 0; a < np; ++a)
        for (int b = 0; b < np; ++b) Cpp(a, b) = C(out.j_plus[a], out.j_plus[b]);
    const Mat P = pinv_sym(Cpp);
    Vec u(np);
    const int ii = static_cast<int>(i) - 1;
    for (int a = 0; a < np; ++a) u[a] = C(ii, out.j_plus[a]);
    const Vec ocf = mul(P, u);
    out.o_coeffs.assign(n, 0.0);
    for (int a = 0; a < np; ++a) out.o_coeffs[out.j_plus[a]] = ocf[a];

    out.meas_branch0.assign(n, 0.0);
    out.meas_branch1 = out.o_coeffs;
    for (int j = 0; j < n; ++j)
        out.meas_branch0[j] = -p * out.o_coeffs[j] / (1.0 - p);
    out.meas_branch0[ii] += 1.0 / (1.0 - p);

    // Identity check ((C^{-1})_--)^{-1} = Schur on a slightly mixed copy,
    // where C is invertible and both sides are classical matrix algebra.
    const double dmix = 1e-3;
    Vec v = state.theta;
    for (double& t : v) t *= (1.0 - dmix);
    const Mat Cm = covariance_from_bloch(v, state.k);
    const Mat Cminv = inv_or_pinv(Cm);
    const int nm = static_cast<int>(out.j_minus.size());
    Mat block(nm, nm);
    for (int a = 0; a < nm; ++a)
        for (int b = 0; b < nm; ++b) block(a, b) = Cminv(out.j_minus[a], out.j_minus[b]);
    const Mat lhs = inv_or_pinv(block);
    const Mat rhs = schur_complement_minus(Cm, out.j_plus, out.j_minus);
    out.schur_identity_error = max_abs(sub(lhs, rhs));
    return out;
}

CMat dense_pauli(ClassLabel j, int k) {
    const int dim = 1 << k;
    const std::uint32_t mask = (1u << k) - 1;
    const std::uint32_t x = j & mask, z = j >> k;
    CMat M(dim);
    static const cd kI(0.0, 1.0);
    cd phase = 1.0;
    for (int q = 0; q < (std::popcount(x & z) & 3); ++q) phase *= kI;
    for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(dim); ++c) {
        cd v = phase;
        if (std::popcount(z & c) & 1) v = -v;
        M(static_cast<int>(c ^ x), static_cast<int>(c)) = v;
    }
    return M;
}

CMat density_from_bloch(const Vec& theta, int k) {
    const int dim = 1 << k;
    if (static_cast<int>(theta.size()) != bloch_dim(k))
        throw ConfigError("density_from_bloch: wrong Bloch length");
    CMat rho = CMat::identity(dim);
    for (int j = 1; j <= bloch_dim(k); ++j) {
        if (theta[j - 1] == 0.0) continue;
        const CMat P = dense_pauli(static_cast<ClassLabel>(j), k);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) rho(a, b) += theta[j - 1] * P(a, b);
    }
    const double scale = 1.0 / dim;
    for (auto& v : rho.a) v *= scale;
    return rho;
}

CMat sld_operator(const CMat& rho, const CMat& drho) {
    const HermEig eg = herm_eig(rho);
    const int dim = rho.n;
    // <a| drho |b> in the eigenbasis.
    const CMat Vd = adjoint(eg.vectors);
    const CMat B = mul(Vd, mul(drho, eg.vectors));
    CMat Lbasis(dim);
    double wmax = 0.0;
    for (double w : eg.values) wmax = std::max(wmax, std::abs(w));
    const double tol = 1e-12 * std::max(1.0, wmax);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            const double den = eg.values[a] + eg.values[b];
            if (den > tol) Lbasis(a, b) = 2.0 * B(a, b) / den;
        }
    return mul(eg.vectors, mul(Lbasis, Vd));
}

double sld_qfim_entry(const CMat& rho, const CMat& La, const CMat& Lb) {
    // tr[rho (La Lb + Lb La)/2] is real for Hermitian inputs.
    const CMat M = mul(rho, mul(La, Lb));
    const CMat N = mul(rho, mul(Lb, La));
    return 0.5 * (trace(M) + trace(N)).real();
}

}  // namespace qec
