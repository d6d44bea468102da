#include "doctest.h"

#include <cmath>

#include "qec/channels.hpp"
#include "qec/codes.hpp"
#include "qec/fisher.hpp"
#include "qec/noise.hpp"

using namespace qec;

namespace {
const ClassLabel kZ1 = make_label(0, 1, 1);
}

TEST_CASE("per-shot information function special values") {
    CHECK(fisher_f(0.0, 0.0) == doctest::Approx(1.0));
    CHECK(fisher_f(0.0, 0.25) == doctest::Approx(0.25));   // (1-2eps)^2
    CHECK(fisher_f(0.5, 0.5) == doctest::Approx(0.0));
    CHECK(fisher_f(0.8, 0.0) == doctest::Approx(1.0 / (1 - 0.64)));
    // Symmetric under eps -> 1 - eps.
    CHECK(fisher_f(0.3, 0.9) == doctest::Approx(fisher_f(0.3, 0.1)));
}

TEST_CASE("information function inverse round trips") {
    for (double theta : {0.0, 0.3, 0.9}) {
        for (double eps : {0.0, 0.01, 0.2, 0.49}) {
            const double F = fisher_f(theta, eps);
            CHECK(fisher_f_inv(theta, F) == doctest::Approx(eps).epsilon(1e-10));
        }
        CHECK(fisher_f_inv(theta, 0.0) == doctest::Approx(0.5));
    }
}

TEST_CASE("derivative of the information function at zero error") {
    for (double theta : {0.0, 0.4, 0.7}) {
        const double h = 1e-7;
        const double numeric = (fisher_f(theta, h) - fisher_f(theta, 0.0)) / h;
        const double t2 = 1 - theta * theta;
        CHECK(fisher_f_prime0(theta) == doctest::Approx(-4.0 / (t2 * t2)));
        CHECK(numeric == doctest::Approx(fisher_f_prime0(theta)).epsilon(1e-5));
    }
}

TEST_CASE("two-qubit repetition code has closed-form conditional information") {
    const double q = 0.04;
    const StabilizerCode code = catalog("rep2");
    const SyndromeTable t =
        ml_normalize(enumerate_exact(code, NoiseModel::bitflip(q)), kZ1);

    // Trivial syndrome: rate q^2/(q^2 + (1-q)^2); defect syndrome: exactly 1/2.
    const double p0 = (1 - q) * (1 - q) + q * q;
    CHECK(conditional_error_rate(t, 0, kZ1) == doctest::Approx(q * q / p0));
    CHECK(conditional_error_rate(t, 1, kZ1) == doctest::Approx(0.5));
    CHECK(average_error_rate(t, kZ1) == doctest::Approx(q));

    for (double theta : {0.0, 0.5}) {
        const CsyndResult r = eps_csynd(t, kZ1, theta);
        const double expected_F =
            p0 * fisher_f(theta, q * q / p0) + (1 - p0) * fisher_f(theta, 0.5);
        CHECK(r.fisher == doctest::Approx(expected_F).epsilon(1e-12));
        CHECK(r.eps == doctest::Approx(fisher_f_inv(theta, expected_F)).epsilon(1e-12));
        CHECK(r.eps_lo == doctest::Approx(r.eps));  // exact table: zero bracket width
        CHECK(r.eps_hi == doctest::Approx(r.eps));

        const Theorem1Check c = theorem1_check(q, r.eps, theta);
        CHECK(c.pass);
        CHECK(c.lower == doctest::Approx((1 - theta * theta) / 2 * q));
        CHECK(c.upper == doctest::Approx(q));
    }
}

TEST_CASE("conditioned error rate obeys the two-sided bound on catalog codes") {
    for (const char* name : {"rep3", "surface2", "perfect", "steane"}) {
        const StabilizerCode code = catalog(name);
        for (double eta : {1e-3, 0.05, 0.1}) {
            const SyndromeTable t =
                ml_normalize(enumerate_exact(code, NoiseModel::depolarizing(eta)), kZ1);
            const double eps_i = average_error_rate(t, kZ1);
            for (double theta : {0.0, 0.5, 0.9}) {
                const Theorem1Check c = theorem1_check(eps_i, eps_csynd(t, kZ1, theta).eps, theta);
                CAPTURE(name);
                CAPTURE(eta);
                CAPTURE(theta);
                CHECK(c.pass);
                CHECK(c.margin_lower >= -1e-12);
                CHECK(c.margin_upper >= -1e-12);
            }
        }
    }
}

TEST_CASE("truncated tables bracket the exact conditioned error rate") {
    const StabilizerCode code = catalog("steane");
    const NoiseModel noise = NoiseModel::depolarizing(0.01);
    const double exact = eps_csynd(
        ml_normalize(enumerate_exact(code, noise), kZ1), kZ1, 0.0).eps;
    for (int w : {2, 3, 4}) {
        const SyndromeTable t =
            ml_normalize(enumerate_truncated(code, noise, w), kZ1);
        const CsyndResult r = eps_csynd(t, kZ1, 0.0);
        CAPTURE(w);
        CHECK(r.eps_lo <= r.eps + 1e-15);
        CHECK(r.eps <= r.eps_hi + 1e-15);
        CHECK(r.eps_lo <= exact + 1e-12);
        CHECK(exact <= r.eps_hi + 1e-12);
    }
}

TEST_CASE("sampling overhead counts shots for a target standard error") {
    // N = 1 / (sigma^2 F).
    CHECK(sampling_overhead(0.25, 0.01) == doctest::Approx(1.0 / (1e-4 * 0.25)));
    CHECK_THROWS(sampling_overhead(0.0, 0.01));
}

TEST_CASE("shot-count comparison bound") {
    const Corollary2Check c = corollary2_check(0.36, 0.49, 0.5, 0.01);
    CHECK(c.pass);
    CHECK(c.n_synd == doctest::Approx(sampling_overhead(0.49, 0.01)));
    CHECK(c.n_plain == doctest::Approx(sampling_overhead(0.36, 0.01)));
    CHECK(c.n_synd <= c.n_plain);
    CHECK(c.lower <= c.n_synd + 1e-9);
}

TEST_CASE("limiting conditional error rate of hand-built channels") {
    ClassifiedChannel ch;
    ch.s = 5;
    ch.order = 1;
    ch.p_coeff = 3.0;
    SUBCASE("balanced pair gives one half") {
        ch.class_coeffs = {{0, 1.5}, {make_label(1, 0, 1), 1.5}};
        CHECK(limit_channel_eps(ch, kZ1, 1) == doctest::Approx(0.5));
    }
    SUBCASE("two-to-one majority gives one third") {
        ch.class_coeffs = {{0, 2.0}, {make_label(1, 0, 1), 1.0}};
        CHECK(limit_channel_eps(ch, kZ1, 1) == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("commuting classes do not flip the target") {
        ch.class_coeffs = {{0, 2.0}, {make_label(0, 1, 1), 1.0}};
        CHECK(limit_channel_eps(ch, kZ1, 1) == doctest::Approx(0.0));
    }
}

TEST_CASE("small-eta limit of the ratio matches exhaustive evaluation") {
    const double eta = 1e-5;
    for (const char* name : {"rep2", "rep3", "surface2", "perfect", "steane"}) {
        const StabilizerCode code = catalog(name);
        const NoiseModel noise = NoiseModel::depolarizing(eta);
        const SyndromeTable exact = ml_normalize(enumerate_exact(code, noise), kZ1);
        const SeriesTable series = ml_normalize(
            enumerate_leading(code, NoiseModel::depolarizing(eta), code.d), kZ1);
        const SyndromeClassification cls = classify_syndromes(series, kZ1, code.d);
        for (double theta : {0.0, 0.5}) {
            const double eps_i = average_error_rate(exact, kZ1);
            const double ratio = eps_csynd(exact, kZ1, theta).eps / eps_i;
            const double limit = limit_ratio_classical(cls, kZ1, theta);
            CAPTURE(name);
            CAPTURE(theta);
            CHECK(limit == doctest::Approx(ratio).epsilon(5e-3));
        }
    }
}

TEST_CASE("known limiting ratios at theta zero") {
    const auto limit_of = [](const char* name) {
        const StabilizerCode code = catalog(name);
        const SeriesTable series = ml_normalize(
            enumerate_leading(code, NoiseModel::depolarizing(1e-4), code.d), kZ1);
        return limit_ratio_classical(classify_syndromes(series, kZ1, code.d), kZ1, 0.0);
    };
    CHECK(limit_of("rep2") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(limit_of("surface2") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(limit_of("perfect") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(limit_of("steane") == doctest::Approx(5.0 / 6.0).epsilon(1e-6));
    CHECK(limit_of("steane") < 1.0);
    CHECK(limit_of("surface3") < 1.0);
}

TEST_CASE("csv helpers emit one line per row") {
    RatioRow row;
    row.eta = 1e-3;
    row.theta = 0.5;
    row.eps = 0.01;
    row.eps_csynd = 0.008;
    row.ratio = 0.8;
    row.limit = 0.79;
    const std::string header = ratio_csv_header();
    const std::string line = ratio_csv_row("rep2", row);
    CHECK(header.find("eta") != std::string::npos);
    CHECK(header.find("ratio") != std::string::npos);
    CHECK(line.find("rep2") != std::string::npos);
    CHECK(line.find('\n') == std::string::npos);
}
