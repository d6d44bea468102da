#pragma once

#include <complex>
#include <vector>

#include "qec/channels.hpp"
#include "qec/linalg.hpp"
#include "qec/noise.hpp"

namespace qec {

// A k-qubit logical state described by its generalized Bloch vector
// theta_j = <psi| P_j |psi>, indexed by nontrivial packed labels (entry j-1).
struct BlochState {
    int k = 0;
    std::vector<std::complex<double>> amplitudes;  // empty for synthetic vectors
    Vec theta;
};

// Computes theta by applying each Pauli label with bit arithmetic.
// Throws ConfigError when the amplitude norm deviates from 1 by > 1e-10.
BlochState bloch_from_state(const std::vector<std::complex<double>>& amplitudes);

// Wraps an explicit Bloch vector (pure or mixed) without amplitudes.
BlochState bloch_from_theta(const Vec& theta, int k);

// Structure constant of the symmetrized product: for commuting labels
// j != l, P_j P_l = sign * P_{j xor l} with sign = +/-1; returns 0 when the
// labels anticommute (the anticommutator vanishes) and 2 is never needed
// because j == l is handled by callers.
int anticommutator_sign(ClassLabel j, ClassLabel l, int k);

// C(v)_{jl} = delta_{jl} + sign_{jl} v_{j xor l} - v_j v_l over nontrivial
// labels.  Valid for any Bloch vector v of a density operator.
Mat covariance_from_bloch(const Vec& v, int k);

// Covariance of the state after mixing weight delta of the maximally mixed
// state: equals covariance_from_bloch((1-delta) * theta).
Mat covariance(const BlochState& state, double delta = 0.0);

// QFIM of the state with Bloch vector A*theta + c, pulled back through the
// affine map: J = A^T C(A theta + c)^{-1} A.  delta > 0 mixes the output
// Bloch vector before inverting; delta == 0 uses the spectral pseudo-inverse.
Mat qfim_noisy(const Mat& A, const Vec& c, const BlochState& state,
               double delta = 0.0);

// Pauli-channel special case A = diag(lambda), c = 0.
Mat qfim_pauli(const Vec& lambda, const BlochState& state, double delta = 0.0);

// J^Synd = sum_s p_s Lambda_s C(Lambda_s theta)^{-1} Lambda_s.  Unenumerated
// mass is charged to an identity-channel branch (treated as noiseless).
Mat qfim_syndrome(const SyndromeTable& table, const BlochState& state,
                  double delta = 0.0);

// Scalar information about theta_i alone: 1 / (J^{-1})_{ii}.
double qfi_entry(const Mat& J, ClassLabel i);

// f_inv(theta_i, J_theta_i): error rate of the agnostic protocol with the
// same per-sample information.
double eps_qsynd(double J_theta_i, double theta_i);

// Delta_i = e_i^T (C - C L C(L theta)^{-1} L C) e_i / 4 for the diagonal
// channel L = diag(lambda): the syndrome's contribution to eps_qsynd.
double delta_contribution(const Vec& lambda, const BlochState& state, ClassLabel i,
                          double delta = 0.0);

// Fast path for channels of the form rho -> (sigma_c rho sigma_c +
// sigma_{cQ} rho sigma_{cQ})/2: lambda is the projector onto labels
// commuting with Q times a sign pattern, and Delta_i reduces to a quarter of
// the generalized Schur complement entry.  Returns 0 when i commutes with Q.
double delta_contribution_projector(const BlochState& state, ClassLabel Q,
                                    ClassLabel i);

// Generalized Schur complement C_mm - C_mp pinv(C_pp) C_pm for the index
// partition (plus, minus), with pinv handling singular C_pp.
Mat schur_complement_minus(const Mat& C, const std::vector<int>& plus,
                           const std::vector<int>& minus);

// Limiting Bloch-contraction vector of a classified syndrome channel.
Vec limit_channel_lambda(const ClassifiedChannel& ch, int k);

// True when the channel is a two-element coset {c, cQ} with equal leading
// mass and Q anticommuting with the target; writes Q when requested.
bool lemma1_form(const ClassifiedChannel& ch, ClassLabel target, int k,
                 ClassLabel* q_out = nullptr);

// eta -> 0 limit of eps_qsynd / eps_i from the leading-order classification;
// mirrors the classical limit with Delta_i replacing the flip rate for the
// order-Theta(1) syndromes.
double limit_ratio_quantum(const SyndromeClassification& cls, const BlochState& state,
                           ClassLabel target);

// Closed forms for the two-branch state (1-p)|0><0| (x) rho(theta) +
// p|1><1| (x) N(rho(theta)) with N = (id + Q.Q)/2.
struct SimplifiedStateResult {
    std::vector<int> j_plus;   // 0-based indices (label-1) commuting with Q
    std::vector<int> j_minus;  // anticommuting with Q
    Mat schur;                 // ((C^{-1})_--)^{-1} as generalized Schur complement
    Mat j_synd_inverse;        // C + p/(1-p) * embed(schur) on the minus block
    Vec o_coeffs;              // O_i over all labels (support on j_plus)
    Vec meas_branch0;          // (P_i - p O_i)/(1-p) coefficient vector
    Vec meas_branch1;          // O_i coefficient vector
    double variance_bound = 0; // e_i^T schur e_i
    double schur_identity_error = 0;  // identity check on a mixed copy
};
SimplifiedStateResult simplified_state_suite(const BlochState& state, double p,
                                             ClassLabel Q, ClassLabel i);

// Dense-matrix oracles (k <= 2): k-qubit Pauli, Bloch-vector state, SLD via
// the eigendecomposition formula, and the QFIM entry Re tr[rho L_a L_b].
CMat dense_pauli(ClassLabel j, int k);
CMat density_from_bloch(const Vec& theta, int k);
CMat sld_operator(const CMat& rho, const CMat& drho);
double sld_qfim_entry(const CMat& rho, const CMat& La, const CMat& Lb);

}  // namespace qec
