#include "doctest.h"

#include <cmath>
#include <complex>

#include "qec/channels.hpp"
#include "qec/codes.hpp"
#include "qec/haar.hpp"
#include "qec/noise.hpp"
#include "qec/qfisher.hpp"
#include "qec/rng.hpp"

using namespace qec;

namespace {
const ClassLabel kZ1 = make_label(0, 1, 1);
}

TEST_CASE("haar samples are normalized pure states") {
    Rng rng(61, 0);
    for (int k = 1; k <= 3; ++k) {
        const BlochState psi = sample_haar(k, rng);
        CHECK(psi.k == k);
        double norm2 = 0;
        for (const auto& a : psi.amplitudes) norm2 += std::norm(a);
        CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
        // Purity: sum of squared Bloch components is 2^k - 1.
        double s = 0;
        for (double t : psi.theta) s += t * t;
        CHECK(s == doctest::Approx((1 << k) - 1.0).epsilon(1e-10));
        // Bloch vector is consistent with the amplitudes.
        const BlochState again = bloch_from_state(psi.amplitudes);
        for (std::size_t j = 0; j < psi.theta.size(); ++j)
            CHECK(again.theta[j] == doctest::Approx(psi.theta[j]).epsilon(1e-12));
    }
}

TEST_CASE("second moment of each Bloch component is one over 2^k plus one") {
    const int n = 4000;
    for (int k = 1; k <= 2; ++k) {
        for (ClassLabel j : {ClassLabel(1), ClassLabel(3)}) {
            const AveragedQuantity avg = haar_mean(
                k, n, 77, 0, [j](int, const BlochState& psi) {
                    const double t = psi.theta[j - 1];
                    return t * t;
                });
            const double want = 1.0 / ((1 << k) + 1.0);
            CAPTURE(k);
            CHECK(avg.n == n);
            CHECK(std::abs(avg.mean - want) < 5 * avg.se);
            CHECK(avg.se < 0.1 * avg.mean);
        }
    }
}

TEST_CASE("haar averaging is deterministic and thread invariant") {
    const auto value = [](int, const BlochState& psi) { return psi.theta[0]; };
    const AveragedQuantity a = haar_mean(2, 500, 123, 1, value);
    const AveragedQuantity b = haar_mean(2, 500, 123, 4, value);
    const AveragedQuantity c = haar_mean(2, 500, 124, 1, value);
    CHECK(a.mean == b.mean);  // bitwise: shard-ordered reduction
    CHECK(a.se == b.se);
    CHECK(a.mean != c.mean);  // different seed, different sample
}

TEST_CASE("projector deficit averages to two to the minus k plus two") {
    for (int k = 1; k <= 3; ++k) {
        const ClassLabel Q = make_label(1, 0, k);       // X-type flip
        const ClassLabel target = make_label(0, 1, k);  // Z target
        const AveragedQuantity avg = lemma1_average(k, Q, target, 2000, 99, 0);
        const double want = std::pow(2.0, -(k + 2));
        CAPTURE(k);
        CHECK(std::abs(avg.mean - want) < 5 * avg.se);
        CHECK(avg.se < 0.1 * avg.mean);
    }
}

TEST_CASE("projector deficit is insensitive to the specific anticommuting pair") {
    const AveragedQuantity a = lemma1_average(2, make_label(1, 0, 2), make_label(0, 1, 2), 1500, 7, 0);
    const AveragedQuantity b = lemma1_average(2, make_label(3, 0, 2), make_label(0, 1, 2), 1500, 7, 0);
    CHECK(std::abs(a.mean - 0.0625) < 5 * a.se);
    CHECK(std::abs(b.mean - 0.0625) < 5 * b.se);
}

TEST_CASE("haar-average of the flip-sector Schur block is the scaled identity") {
    for (int k = 1; k <= 2; ++k) {
        const ClassLabel Q = make_label(1, 0, k);
        const Prop3Result r = prop3_average(k, Q, 1500, 1234, 0);
        const int nm = static_cast<int>(r.j_minus.size());
        REQUIRE(r.mean.rows == nm);
        const double want = std::pow(2.0, -k);
        for (int a = 0; a < nm; ++a)
            for (int b = 0; b < nm; ++b) {
                const double target = (a == b) ? want : 0.0;
                CAPTURE(k);
                CHECK(std::abs(r.mean(a, b) - target) < 5 * r.se(a, b) + 1e-12);
                if (a == b) CHECK(r.se(a, b) < 0.1 * r.mean(a, b));
            }
    }
}

TEST_CASE("limit-ratio average halves with each extra block") {
    // Blocks of the d=2 surface code under depolarizing noise satisfy the
    // exact 2^-(k+1) anchor.
    for (int k = 1; k <= 2; ++k) {
        const StabilizerCode code = block_product(catalog("surface2"), k);
        const ClassLabel target = make_label(0, 1u, k);  // Z on block 0
        const SeriesTable series = ml_normalize(
            enumerate_leading(code, NoiseModel::depolarizing(1e-3), 1), target);
        const SyndromeClassification cls = classify_syndromes(series, target, code.d);
        const Thm2Result r = thm2_ratio(cls, target, 1200, 4321, 0);
        CAPTURE(k);
        CHECK(r.qualifies);
        const double want = std::pow(2.0, -(k + 1));
        CHECK(std::abs(r.ratio.mean - want) < 5 * r.ratio.se);
        CHECK(r.ratio.se < 0.1 * r.ratio.mean);
    }
}

TEST_CASE("odd-distance codes do not qualify and report a flat unit ratio") {
    const StabilizerCode code = catalog("rep3");
    const SeriesTable series = ml_normalize(
        enumerate_leading(code, NoiseModel::depolarizing(1e-3), 2), kZ1);
    const SyndromeClassification cls = classify_syndromes(series, kZ1, code.d);
    const Thm2Result r = thm2_ratio(cls, kZ1, 200, 5, 0);
    CHECK_FALSE(r.qualifies);
    CHECK(r.ratio.mean == doctest::Approx(1.0));
    CHECK(r.ratio.se == doctest::Approx(0.0));
    CHECK_FALSE(r.note.empty());
}

TEST_CASE("single-error channel sweep decreases with k and scales with flip weight") {
    const std::vector<int> ks = {1, 2};
    const auto rows = fig5_sweep(ks, 0.01, 0.005, 0.02, 400, 31, 0);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].k == 1);
    CHECK(rows[1].k == 2);
    for (const auto& r : rows) {
        CHECK(r.mean > 0);
        CHECK(r.n == 400);
    }
    CHECK(rows[1].mean < rows[0].mean);
    // Doubling the anticommuting error weights doubles the deficit estimate
    // at leading order (ez only rescales the commuting branch).
    const auto twice = fig5_sweep({1}, 0.02, 0.01, 0.02, 400, 31, 0);
    REQUIRE(twice.size() == 1);
    CHECK(twice[0].mean == doctest::Approx(2 * rows[0].mean).epsilon(0.1));
}

TEST_CASE("block sweep rows qualify and halve for the even-distance code") {
    const auto rows = fig6_sweep({"surface2"}, {1, 2}, "depolarizing", 400, 11,
                                 QEC_DATA_DIR, 0);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.qualifies);
        CHECK(r.code == "surface2");
        CHECK(r.n == 400);
    }
    const double halving = rows[1].mean / rows[0].mean;
    CHECK(halving == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("block sweep flags the odd-distance code as flat") {
    const auto rows = fig6_sweep({"rep3"}, {1, 2}, "depolarizing", 50, 12,
                                 QEC_DATA_DIR, 0);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK_FALSE(r.qualifies);
        CHECK(r.mean == doctest::Approx(1.0));
    }
}

TEST_CASE("csv helpers") {
    AveragedQuantity avg{0.125, 0.001, 1000};
    const std::string line = haar_csv_row("deficit", 2, "x", avg, 42);
    CHECK(haar_csv_header().find("mean") != std::string::npos);
    CHECK(line.find("deficit") != std::string::npos);
    CHECK(line.find('\n') == std::string::npos);
}
