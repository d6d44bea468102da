#include "qec/fisher.hpp"

#include <cmath>
#include <sstream>

#include "qec/util.hpp"

namespace qec {

double fisher_f(double theta, double eps) {
    if (theta <= -1.0 || theta >= 1.0) {
        if (eps == 0.0) throw ConfigError("fisher_f diverges at |theta| = 1, eps = 0");
        if (theta < -1.0 || theta > 1.0) throw ConfigError("fisher_f: |theta| > 1");
    }
    if (eps < 0.0 || eps > 1.0) throw ConfigError("fisher_f: eps outside [0, 1]");
    const double u = (1.0 - 2.0 * eps) * (1.0 - 2.0 * eps);
    return u / (1.0 - u * theta * theta);
}

double fisher_f_inv(double theta, double F) {
    if (theta <= -1.0 || theta >= 1.0) throw ConfigError("fisher_f_inv: |theta| >= 1");
    if (F < 0.0) {
        if (F > -1e-12) F = 0.0;
        else throw ConfigError("fisher_f_inv: negative information");
    }
    const double fmax = 1.0 / (1.0 - theta * theta);
    if (F > fmax) {
        if (F < fmax * (1.0 + 1e-9)) F = fmax;
        else throw ConfigError("fisher_f_inv: F exceeds 1/(1-theta^2)");
    }
    const double u = F / (1.0 + F * theta * theta);  // (1-2eps)^2
    return (1.0 - std::sqrt(u)) / 2.0;
}

double fisher_f_prime0(double theta) {
    const double c = 1.0 - theta * theta;
    return -4.0 / (c * c);
}

CsyndResult eps_csynd(const SyndromeTable& table, ClassLabel target, double theta) {
    double F = 0.0;
    for (const auto& entry : table.entries) {
        double p = 0.0, anti = 0.0;
        for (const auto& [label, mass] : entry.classes) {
            p += mass;
            if (label_anticommutes(label, target, table.k)) anti += mass;
        }
        if (p <= 0.0) continue;
        F += p * fisher_f(theta, anti / p);
    }
    CsyndResult out;
    out.fisher = F;
    out.eps = fisher_f_inv(theta, F);
    // Excluded mass placed in fresh majority-only syndromes adds f(theta, 0)
    // per unit; placed in the minority class of an enumerated syndrome it
    // removes at most (3 + theta^2) / (1 - theta^2)^2 per unit (the steepest
    // descent of p * f over class-mass splits, attained at a pure syndrome).
    const double t2 = theta * theta;
    const double drop = (3.0 + t2) / ((1.0 - t2) * (1.0 - t2));
    out.eps_hi =
        fisher_f_inv(theta, std::max(0.0, F - table.excluded_mass * drop));
    out.eps_lo = fisher_f_inv(theta, F + table.excluded_mass * fisher_f(theta, 0.0));
    return out;
}

Theorem1Check theorem1_check(double eps_i, double eps_csynd, double theta) {
    Theorem1Check out;
    out.lower = 0.5 * (1.0 - theta * theta) * eps_i;
    out.upper = eps_i;
    out.value = eps_csynd;
    out.margin_lower = eps_csynd - out.lower;
    out.margin_upper = eps_i - eps_csynd;
    out.pass = out.margin_lower >= -1e-12 && out.margin_upper >= -1e-12;
    return out;
}

double sampling_overhead(double F, double sigma) {
    if (F <= 0.0) throw ConfigError("sampling_overhead: nonpositive information");
    if (sigma <= 0.0) throw ConfigError("sampling_overhead: nonpositive sigma");
    return 1.0 / (sigma * sigma * F);
}

Corollary2Check corollary2_check(double F_plain, double F_synd, double theta,
                                 double sigma) {
    Corollary2Check out;
    out.n_plain = sampling_overhead(F_plain, sigma);
    out.n_synd = sampling_overhead(F_synd, sigma);
    const double t2s2 = theta * theta / (sigma * sigma);
    out.lower = (1.0 - theta * theta) / sigma * std::sqrt(out.n_plain + t2s2);
    const double tol = 1e-9 * (1.0 + out.n_plain);
    out.pass = out.n_synd >= out.lower - tol && out.n_synd <= out.n_plain + tol;
    return out;
}

double limit_channel_eps(const ClassifiedChannel& ch, ClassLabel target, int k) {
    double com = 0.0, anti = 0.0;
    for (const auto& [label, coeff] : ch.class_coeffs) {
        if (label_anticommutes(label, target, k)) anti += coeff;
        else com += coeff;
    }
    if (com + anti <= 0.0) return 0.0;
    return anti / (com + anti);
}

namespace {

double channel_mass(const ClassifiedChannel& ch) {
    double m = 0.0;
    for (const auto& [label, coeff] : ch.class_coeffs) m += coeff;
    return m;
}

}  // namespace

double limit_ratio_classical(const SyndromeClassification& cls, ClassLabel target,
                             double theta) {
    const int k = cls.k;
    const double fp0 = fisher_f_prime0(theta);
    double num = 0.0, den = 0.0;
    for (const auto& ch : cls.theta1) {
        const double c = channel_mass(ch);
        const double e = limit_channel_eps(ch, target, k);
        num += c * (fisher_f(theta, e) - fisher_f(theta, 0.0)) / fp0;
        den += c * e;
    }
    for (const auto& ch : cls.theta_eta) {
        num += ch.minority_coeff;
        den += ch.minority_coeff;
    }
    if (den <= 0.0) {
        throw InfeasibleError(
            "limit_ratio_classical: no syndromes contribute at leading order");
    }
    return num / den;
}

std::string ratio_csv_header() {
    return "code,eta,theta,eps,eps_csynd,ratio,lower,upper,limit";
}

std::string ratio_csv_row(const std::string& code, const RatioRow& row) {
    std::ostringstream os;
    os << code << ',' << format_double(row.eta) << ',' << format_double(row.theta)
       << ',' << format_double(row.eps) << ',' << format_double(row.eps_csynd) << ','
       << format_double(row.ratio) << ',' << format_double(row.lower) << ','
       << format_double(row.upper) << ',' << format_double(row.limit);
    return os.str();
}

}  // namespace qec
