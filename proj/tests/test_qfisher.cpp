#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "qec/channels.hpp"
#include "qec/codes.hpp"
#include "qec/haar.hpp"
#include "qec/linalg.hpp"
#include "qec/noise.hpp"
#include "qec/fisher.hpp"
#include "qec/qfisher.hpp"
#include "qec/rng.hpp"

using namespace qec;

namespace {

int bloch_dim(int k) { return (1 << (2 * k)) - 1; }

// Random Bloch vector of a mixed state: a Haar pure state shrunk toward the
// maximally mixed point, which keeps the density matrix strictly positive.
Vec random_mixed_bloch(int k, double radius, Rng& rng) {
    const BlochState pure = sample_haar(k, rng);
    Vec v = pure.theta;
    for (double& t : v) t *= radius;
    return v;
}

CMat density_derivative(ClassLabel j, double lambda_j, int k) {
    // d rho / d theta_j for the Bloch family rho = (I + sum lambda theta P)/2^k.
    const int dim = 1 << k;
    CMat P = dense_pauli(j, k);
    const double s = lambda_j / dim;
    for (auto& v : P.a) v *= s;
    return P;
}

}  // namespace

TEST_CASE("dense Pauli matrices are Hermitian involutions with the XOR product") {
    for (int k = 1; k <= 2; ++k) {
        const int n = bloch_dim(k);
        const int dim = 1 << k;
        for (ClassLabel j = 1; j <= static_cast<ClassLabel>(n); ++j) {
            const CMat P = dense_pauli(j, k);
            const CMat Pd = adjoint(P);
            double herm = 0, invol = 0;
            const CMat PP = mul(P, P);
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) {
                    herm = std::max(herm, std::abs(P(a, b) - Pd(a, b)));
                    invol = std::max(invol,
                                     std::abs(PP(a, b) - (a == b ? 1.0 : 0.0)));
                }
            CHECK(herm < 1e-12);
            CHECK(invol < 1e-12);
            CHECK(std::abs(trace(P)) < 1e-12);  // traceless for j != 0
        }
        // Pairwise products equal the XOR label up to the tracked sign.
        for (ClassLabel j = 1; j <= static_cast<ClassLabel>(n); ++j)
            for (ClassLabel l = 1; l <= static_cast<ClassLabel>(n); ++l) {
                const CMat lhs = mul(dense_pauli(j, k), dense_pauli(l, k));
                const int s = anticommutator_sign(j, l, k);
                if (j == l) continue;
                const cd tr = trace(mul(lhs, dense_pauli(j ^ l, k)));
                // tr(P_j P_l P_{j^l}) / dim = symmetric part sign.
                CHECK(std::abs(tr.real() / dim - s) < 1e-12);
            }
    }
}

TEST_CASE("Bloch extraction agrees with dense expectations") {
    Rng rng(41, 0);
    for (int k = 1; k <= 2; ++k) {
        const BlochState psi = sample_haar(k, rng);
        const CMat rho = density_from_bloch(psi.theta, k);
        CHECK(std::abs(trace(rho) - cd(1.0, 0.0)) < 1e-12);
        for (ClassLabel j = 1; j <= static_cast<ClassLabel>(bloch_dim(k)); ++j) {
            const cd e = trace(mul(rho, dense_pauli(j, k)));
            CHECK(e.real() == doctest::Approx(psi.theta[j - 1]).epsilon(1e-10));
            CHECK(std::abs(e.imag()) < 1e-12);
        }
    }
}

TEST_CASE("covariance matches dense anticommutator averages") {
    Rng rng(42, 0);
    for (int k = 1; k <= 2; ++k) {
        const Vec v = random_mixed_bloch(k, 0.7, rng);
        const CMat rho = density_from_bloch(v, k);
        const Mat C = covariance_from_bloch(v, k);
        const int n = bloch_dim(k);
        for (int j = 1; j <= n; ++j)
            for (int l = 1; l <= n; ++l) {
                const CMat half = mul(dense_pauli(j, k), dense_pauli(l, k));
                const CMat other = mul(dense_pauli(l, k), dense_pauli(j, k));
                cd acc = 0.0;
                const CMat sum = add(half, other);
                acc = trace(mul(rho, sum)) * 0.5;
                const double want = acc.real() - v[j - 1] * v[l - 1];
                CHECK(C(j - 1, l - 1) == doctest::Approx(want).epsilon(1e-9));
            }
    }
}

TEST_CASE("pure-state covariance spectrum and null vector") {
    Rng rng(43, 0);
    for (int k = 1; k <= 3; ++k) {
        const BlochState psi = sample_haar(k, rng);
        const Mat C = covariance_from_bloch(psi.theta, k);
        // C annihilates its own Bloch vector.
        const Vec ct = mul(C, psi.theta);
        for (double x : ct) CHECK(std::abs(x) < 1e-9);
        const SymEig eig = jacobi_eig(C);
        const double big = std::pow(2.0, k - 1);
        int zero_count = 0, big_count = 0;
        for (double w : eig.values) {
            if (std::abs(w) < 1e-9)
                ++zero_count;
            else if (std::abs(w - big) < 1e-9)
                ++big_count;
            else
                FAIL("unexpected eigenvalue ", w);
        }
        const int q = (1 << k) - 1;
        CHECK(zero_count == q * q);
        CHECK(big_count == 2 * q);
    }
}

TEST_CASE("quantum information matrix matches the dense SLD computation") {
    Rng rng(44, 0);
    for (int k = 1; k <= 2; ++k) {
        const int n = bloch_dim(k);
        for (int trial = 0; trial < 10; ++trial) {
            const Vec theta = random_mixed_bloch(k, 0.6, rng);
            const BlochState state = bloch_from_theta(theta, k);
            // Random diagonal Pauli channel contraction.
            Vec lambda(n);
            for (double& l : lambda) l = 0.25 + 0.7 * rng.uniform();
            const Mat J = qfim_pauli(lambda, state);

            Vec out = theta;
            for (int j = 0; j < n; ++j) out[j] *= lambda[j];
            const CMat rho = density_from_bloch(out, k);
            std::vector<CMat> slds;
            for (int j = 1; j <= n; ++j)
                slds.push_back(sld_operator(
                    rho, density_derivative(static_cast<ClassLabel>(j), lambda[j - 1], k)));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const double want = sld_qfim_entry(rho, slds[a], slds[b]);
                    CHECK(J(a, b) == doctest::Approx(want).epsilon(1e-6).scale(1.0));
                }
        }
    }
}

TEST_CASE("sld_operator solves the Lyapunov equation") {
    Rng rng(45, 0);
    const int k = 2;
    const Vec theta = random_mixed_bloch(k, 0.5, rng);
    const CMat rho = density_from_bloch(theta, k);
    const CMat drho = density_derivative(3, 0.8, k);
    const CMat L = sld_operator(rho, drho);
    const CMat lhs = mul(rho, L);
    const CMat rhs = mul(L, rho);
    for (int a = 0; a < rho.n; ++a)
        for (int b = 0; b < rho.n; ++b) {
            const cd v = 0.5 * (lhs(a, b) + rhs(a, b));
            CHECK(std::abs(v - drho(a, b)) < 1e-8);
        }
}

TEST_CASE("identity channel information inverts the covariance") {
    Rng rng(46, 0);
    for (int k = 1; k <= 2; ++k) {
        const Vec theta = random_mixed_bloch(k, 0.55, rng);
        const BlochState state = bloch_from_theta(theta, k);
        const Vec ones(bloch_dim(k), 1.0);
        const Mat J = qfim_pauli(ones, state);
        const Mat C = covariance_from_bloch(theta, k);
        CHECK(max_abs(sub(mul(J, C), Mat::identity(bloch_dim(k)))) < 1e-8);
    }
}

TEST_CASE("generalized Schur complement identities") {
    Rng rng(47, 0);
    const int n = 6;
    Mat g(n, n);
    for (auto& v : g.a) v = rng.normal();
    Mat C = mul(transpose(g), g);
    for (int i = 0; i < n; ++i) C(i, i) += 0.4;
    const std::vector<int> plus = {0, 2, 5};
    const std::vector<int> minus = {1, 3, 4};
    const Mat S = schur_complement_minus(C, plus, minus);

    // Classical identity: Schur complement is the inverse of the minus-block
    // of the inverse.
    Mat Cinv;
    REQUIRE(inverse_spd(C, Cinv));
    Mat block(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) block(a, b) = Cinv(minus[a], minus[b]);
    Mat blockinv;
    REQUIRE(inverse_spd(block, blockinv));
    CHECK(max_abs(sub(S, blockinv)) < 1e-8);
}

TEST_CASE("projector channel contribution equals its Schur form") {
    Rng rng(48, 0);
    for (int k = 1; k <= 3; ++k) {
        const int n = bloch_dim(k);
        for (int trial = 0; trial < 8; ++trial) {
            const BlochState psi = sample_haar(k, rng);
            const ClassLabel Q = 1 + static_cast<ClassLabel>(rng.below(n));
            Vec lambda(n);
            for (int j = 1; j <= n; ++j)
                lambda[j - 1] =
                    label_anticommutes(static_cast<ClassLabel>(j), Q, k) ? 0.0 : 1.0;
            for (ClassLabel i = 1; i <= static_cast<ClassLabel>(n); ++i) {
                const double slow = delta_contribution(lambda, psi, i);
                const double fast = delta_contribution_projector(psi, Q, i);
                if (!label_anticommutes(i, Q, k)) {
                    CHECK(fast == 0.0);
                    CHECK(std::abs(slow) < 1e-9);
                } else {
                    CHECK(slow == doctest::Approx(fast).epsilon(1e-8).scale(1e-3));
                }
            }
        }
    }
}

TEST_CASE("syndrome-resolved information dominates the pooled channel") {
    // Conditioning on the syndrome can only add information: J_synd - J_pool
    // must be positive semidefinite.
    const StabilizerCode code = catalog("surface2");
    const SyndromeTable table =
        ml_normalize(enumerate_exact(code, NoiseModel::depolarizing(0.06)), make_label(0, 1, 1));
    Rng rng(49, 0);
    const Vec theta = random_mixed_bloch(1, 0.6, rng);
    const BlochState state = bloch_from_theta(theta, 1);
    const Mat J_synd = qfim_syndrome(table, state);
    const SyndromeTable pooled = coarse_grain(table, [](std::uint64_t) { return 0ull; });
    const Mat J_pool = qfim_syndrome(pooled, state);
    const SymEig eig = jacobi_eig(sub(J_synd, J_pool));
    for (double w : eig.values) CHECK(w > -1e-8);
}

TEST_CASE("syndrome information matrix is the probability mix of branch matrices") {
    const StabilizerCode code = catalog("rep2");
    const ClassLabel target = make_label(0, 1, 1);
    const SyndromeTable table =
        ml_normalize(enumerate_exact(code, NoiseModel::bitflip(0.05)), target);
    Rng rng(50, 0);
    const Vec theta = random_mixed_bloch(1, 0.5, rng);
    const BlochState state = bloch_from_theta(theta, 1);
    Mat want(3, 3);
    for (const auto& e : table.entries) {
        const Mat Js = qfim_pauli(lambda_vector_of_entry(e, 1), state);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) want(a, b) += e.total * Js(a, b);
    }
    const Mat J = qfim_syndrome(table, state);
    CHECK(max_abs(sub(J, want)) < 1e-10);
}

TEST_CASE("excluded mass enters the information matrix conservatively") {
    // A truncated table must never report more information than the identity
    // channel applied to the missing probability would allow.
    const StabilizerCode code = catalog("steane");
    const ClassLabel target = make_label(0, 1, 1);
    const NoiseModel noise = NoiseModel::depolarizing(0.02);
    const SyndromeTable trunc = ml_normalize(enumerate_truncated(code, noise, 2), target);
    REQUIRE(trunc.excluded_mass > 0);
    const SyndromeTable exact = ml_normalize(enumerate_exact(code, noise), target);
    Rng rng(51, 0);
    const Vec theta = random_mixed_bloch(1, 0.5, rng);
    const BlochState state = bloch_from_theta(theta, 1);
    const Mat Jt = qfim_syndrome(trunc, state);
    const Mat Je = qfim_syndrome(exact, state);
    // The missing probability is completed with the identity channel, the
    // most informative diagonal channel for the same state.
    SyndromeTable no_excl = trunc;
    no_excl.excluded_mass = 0.0;
    const Mat base = qfim_syndrome(no_excl, state);
    const Mat Jid = qfim_pauli(Vec(3, 1.0), state);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            CHECK(Jt(a, b) == doctest::Approx(Jt(b, a)));
            CHECK(Jt(a, b) == doctest::Approx(base(a, b) +
                                              trunc.excluded_mass * Jid(a, b))
                                  .epsilon(1e-10));
            // And the completion stays within a few percent of the exact
            // answer at this truncation depth.
            CHECK(Jt(a, b) == doctest::Approx(Je(a, b)).epsilon(0.05).scale(1.0));
        }
}

TEST_CASE("simplified state closed form against direct inversion") {
    Rng rng(52, 0);
    for (int k = 1; k <= 3; ++k) {
        const int n = bloch_dim(k);
        for (int trial = 0; trial < 8; ++trial) {
            const Vec theta = random_mixed_bloch(k, 0.6, rng);
            const BlochState state = bloch_from_theta(theta, k);
            const ClassLabel i = make_label(0, 1, k);  // first Z label
            // Pick Q anticommuting with i.
            ClassLabel Q = 0;
            do {
                Q = 1 + static_cast<ClassLabel>(rng.below(n));
            } while (!label_anticommutes(Q, i, k));
            const double p = 0.05 + 0.4 * rng.uniform();
            const SimplifiedStateResult r = simplified_state_suite(state, p, Q, i);
            CHECK(r.schur_identity_error < 1e-8);

            // Direct information matrix of the two-branch model.
            Vec lambda(n);
            for (int j = 1; j <= n; ++j)
                lambda[j - 1] =
                    label_anticommutes(static_cast<ClassLabel>(j), Q, k) ? 0.0 : 1.0;
            const Mat J0 = qfim_pauli(Vec(n, 1.0), state);
            const Mat J1 = qfim_pauli(lambda, state);
            Mat J(n, n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    J(a, b) = (1 - p) * J0(a, b) + p * J1(a, b);
            Mat Jinv;
            REQUIRE(inverse_spd(J, Jinv));
            CHECK(max_abs(sub(Jinv, r.j_synd_inverse)) < 1e-7);

            // variance_bound is the target diagonal entry of the Schur block.
            int ti = -1;
            for (std::size_t a = 0; a < r.j_minus.size(); ++a)
                if (r.j_minus[a] == static_cast<int>(i) - 1) ti = static_cast<int>(a);
            REQUIRE(ti >= 0);
            CHECK(r.variance_bound == doctest::Approx(r.schur(ti, ti)));
        }
    }
}

TEST_CASE("simplified-state measurement observable is unbiased across branches") {
    // The two branch observables reproduce theta_i in expectation:
    // (1-p) <M0> + p <M1> with <M_b> evaluated on the branch output state.
    Rng rng(53, 0);
    const int k = 2;
    const int n = bloch_dim(k);
    const Vec theta = random_mixed_bloch(k, 0.5, rng);
    const BlochState state = bloch_from_theta(theta, k);
    const ClassLabel i = make_label(0, 1, k);
    const ClassLabel Q = make_label(1, 0, k);
    REQUIRE(label_anticommutes(Q, i, k) == 1);
    const double p = 0.2;
    const SimplifiedStateResult r = simplified_state_suite(state, p, Q, i);
    double e0 = 0, e1 = 0;
    for (int j = 1; j <= n; ++j) {
        e0 += r.meas_branch0[j - 1] * theta[j - 1];
        const bool kill = label_anticommutes(static_cast<ClassLabel>(j), Q, k);
        e1 += r.meas_branch1[j - 1] * (kill ? 0.0 : theta[j - 1]);
    }
    CHECK((1 - p) * e0 + p * e1 == doctest::Approx(theta[static_cast<int>(i) - 1]).epsilon(1e-10));
}

TEST_CASE("scalar information helpers") {
    Mat J(2, 2);
    J(0, 0) = 4;
    J(1, 1) = 9;
    CHECK(qfi_entry(J, 1) == doctest::Approx(4.0));
    CHECK(qfi_entry(J, 2) == doctest::Approx(9.0));
    // Correlations reduce the effective scalar information.
    J(0, 1) = J(1, 0) = 3;
    CHECK(qfi_entry(J, 1) < 4.0);
    CHECK(eps_qsynd(fisher_f(0.3, 0.1), 0.3) == doctest::Approx(0.1));
}

TEST_CASE("limiting channel contraction of a balanced pair") {
    ClassifiedChannel ch;
    ch.order = 1;
    ch.p_coeff = 2.0;
    const int k = 1;
    const ClassLabel zl = make_label(0, 1, 1);
    ch.class_coeffs = {{0, 1.0}, {make_label(1, 0, 1), 1.0}};
    const Vec lam = limit_channel_lambda(ch, k);
    // Components commuting with the X-type difference survive with the sign
    // pattern of the common factor; anticommuting components vanish.
    CHECK(lam[make_label(1, 0, 1) - 1] == doctest::Approx(1.0));
    CHECK(lam[zl - 1] == doctest::Approx(0.0));
    CHECK(lam[make_label(1, 1, 1) - 1] == doctest::Approx(0.0));

    ClassLabel q = 0;
    CHECK(lemma1_form(ch, zl, k, &q));
    CHECK(q == make_label(1, 0, 1));
    // Not of the two-element balanced form: unequal masses.
    ClassifiedChannel bad = ch;
    bad.class_coeffs[1].second = 0.5;
    CHECK_FALSE(lemma1_form(bad, zl, k, nullptr));
    // Difference commutes with the target.
    ClassifiedChannel comm = ch;
    comm.class_coeffs = {{0, 1.0}, {zl, 1.0}};
    CHECK_FALSE(lemma1_form(comm, zl, k, nullptr));
}

TEST_CASE("quantum limit ratio reproduces the even-distance classical anchor") {
    // For the d=2 surface code the quantum-conditioned limit at a Haar state
    // must be positive and at most one, and the classical theta-degenerate
    // channels drive it strictly below one.
    const StabilizerCode code = catalog("surface2");
    const ClassLabel target = make_label(0, 1, 1);
    const SeriesTable series = ml_normalize(
        enumerate_leading(code, NoiseModel::depolarizing(1e-3), 1), target);
    const SyndromeClassification cls = classify_syndromes(series, target, code.d);
    Rng rng(54, 0);
    for (int trial = 0; trial < 5; ++trial) {
        const BlochState psi = sample_haar(1, rng);
        const double r = limit_ratio_quantum(cls, psi, target);
        CHECK(r > 0.0);
        CHECK(r <= 1.0 + 1e-9);
        CHECK(r < 1.0 - 1e-6);
    }
}
