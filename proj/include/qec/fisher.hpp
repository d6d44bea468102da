#pragma once

#include <string>
#include <vector>

#include "qec/channels.hpp"
#include "qec/noise.hpp"

namespace qec {

// Information about theta_i carried by one +/-1 sample of a logical
// observable whose expectation has been contracted to (1-2*eps)*theta_i.
struct FisherPoint {
    double theta = 0;
    double F = 0;
};

// f(theta, eps) = (1-2eps)^2 / (1 - (1-2eps)^2 theta^2).
// Throws ConfigError when |theta| = 1 and eps = 0 (information diverges).
double fisher_f(double theta, double eps);

// Inverse of fisher_f in eps on [0, 1/2]:
// eps = (1 - sqrt(F / (1 + F theta^2))) / 2.  Requires 0 <= F <= 1/(1-theta^2).
double fisher_f_inv(double theta, double F);

// d f / d eps at eps = 0, in closed form: -4 / (1-theta^2)^2.
double fisher_f_prime0(double theta);

// Effective error rate of the syndrome-aware binary protocol:
// eps = f_inv(theta, sum_s p_s f(theta, eps_{target,s})).
// For truncated tables the interval [eps_lo, eps_hi] brackets every way of
// assigning the unenumerated mass (eps_lo: excluded syndromes noiseless;
// eps_hi: excluded syndromes carry no information).  Exact tables give
// eps_lo == eps == eps_hi.
struct CsyndResult {
    double eps = 0;
    double eps_lo = 0;
    double eps_hi = 0;
    double fisher = 0;  // enumerated-mass information sum
};
CsyndResult eps_csynd(const SyndromeTable& table, ClassLabel target, double theta = 0.0);

// (1-theta^2)/2 * eps_i <= eps_csynd <= eps_i, each side with 1e-12 slack.
struct Theorem1Check {
    bool pass = false;
    double lower = 0;   // (1-theta^2)/2 * eps_i
    double upper = 0;   // eps_i
    double value = 0;   // eps_csynd
    double margin_lower = 0;  // value - lower
    double margin_upper = 0;  // upper - value
};
Theorem1Check theorem1_check(double eps_i, double eps_csynd, double theta);

// Samples needed to reach standard deviation sigma with per-sample
// information F: N = 1 / (sigma^2 F).  Throws ConfigError when F <= 0.
double sampling_overhead(double F, double sigma);

// (1-theta^2)/sigma * sqrt(N_plain + theta^2/sigma^2) <= N_synd <= N_plain.
struct Corollary2Check {
    bool pass = false;
    double n_synd = 0;
    double n_plain = 0;
    double lower = 0;
};
Corollary2Check corollary2_check(double F_plain, double F_synd, double theta, double sigma);

// Leading-order conditional flip rate of a classified syndrome channel:
// anticommuting leading mass over total leading mass.
double limit_channel_eps(const ClassifiedChannel& ch, ClassLabel target, int k);

// Limit of eps_csynd / eps_i as eta -> 0, from the leading-order channel
// classification.  Even distance uses the mixed-at-leading-order syndromes;
// odd distance additionally carries the minority-mass coefficients, which
// enter numerator and denominator identically.  Throws InfeasibleError when
// the classification has no contributing syndromes.
double limit_ratio_classical(const SyndromeClassification& cls, ClassLabel target,
                             double theta);

// One eta point of a ratio sweep.
struct RatioRow {
    double eta = 0;
    double theta = 0;
    double eps = 0;        // syndrome-agnostic eps_i
    double eps_csynd = 0;
    double ratio = 0;
    double lower = 0;      // (1-theta^2)/2
    double upper = 1.0;
    double limit = 0;      // eta -> 0 limit of the ratio
};

struct RatioReport {
    std::string code;
    std::string noise;
    std::vector<RatioRow> rows;
    double limit = 0;
};

// Header: code,eta,theta,eps,eps_csynd,ratio,lower,upper,limit
std::string ratio_csv_header();
std::string ratio_csv_row(const std::string& code, const RatioRow& row);

}  // namespace qec
