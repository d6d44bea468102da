#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "qec/channels.hpp"
#include "qec/codes.hpp"
#include "qec/fisher.hpp"
#include "qec/noise.hpp"
#include "qec/haar.hpp"
#include "qec/protocols.hpp"
#include "qec/rng.hpp"

using namespace qec;

namespace {

const ClassLabel kZ1 = make_label(0, 1, 1);

SyndromeTable rep2_table(double q) {
    return ml_normalize(enumerate_exact(catalog("rep2"), NoiseModel::bitflip(q)), kZ1);
}

}  // namespace

TEST_CASE("sampled shots reproduce entry probabilities and conditional means") {
    const double q = 0.08, theta = 0.4;
    const SyndromeTable t = rep2_table(q);
    Rng rng(71, 0);
    const std::int64_t n = 200000;
    const auto shots = sample_shots(t, kZ1, theta, n, rng);
    REQUIRE(shots.size() == static_cast<std::size_t>(n));

    std::vector<std::int64_t> count(t.entries.size(), 0);
    std::vector<double> xsum(t.entries.size(), 0);
    for (const auto& s : shots) {
        REQUIRE(s.entry < t.entries.size());
        CHECK((s.x == 1 || s.x == -1));
        ++count[s.entry];
        xsum[s.entry] += s.x;
    }
    const Vec eps = entry_error_rates(t, kZ1);
    for (std::size_t e = 0; e < t.entries.size(); ++e) {
        const double p = t.entries[e].total;
        const double se_p = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(double(count[e]) / n - p) < 5 * se_p + 1e-12);
        const double mean_want = (1 - 2 * eps[e]) * theta;
        const double se_x = 1.0 / std::sqrt(double(count[e]));
        CHECK(std::abs(xsum[e] / count[e] - mean_want) < 5 * se_x);
    }
}

TEST_CASE("entry error rates follow the table order") {
    const SyndromeTable t = rep2_table(0.1);
    const Vec eps = entry_error_rates(t, kZ1);
    REQUIRE(eps.size() == t.entries.size());
    for (std::size_t e = 0; e < t.entries.size(); ++e)
        CHECK(eps[e] == doctest::Approx(conditional_error_rate(t, t.entries[e].s, kZ1)));
}

TEST_CASE("agnostic estimator inverts the average contraction") {
    std::vector<ShotRecord> shots;
    for (int i = 0; i < 7; ++i) shots.push_back({0, 1});
    for (int i = 0; i < 3; ++i) shots.push_back({0, -1});
    // mean x = 0.4; eps_i = 0.1 -> contraction 0.8 -> estimate 0.5.
    CHECK(estimate_agnostic(shots, 0.1) == doctest::Approx(0.5));
    CHECK(estimate_agnostic(shots, 0.0) == doctest::Approx(0.4));
}

TEST_CASE("syndrome-weighted estimator is consistent on a large sample") {
    const double q = 0.1, theta = 0.35;
    const SyndromeTable t = rep2_table(q);
    const Vec eps = entry_error_rates(t, kZ1);
    const double eps_i = average_error_rate(t, kZ1);
    Rng rng(72, 0);
    const auto shots = sample_shots(t, kZ1, theta, 400000, rng);
    CHECK(estimate_csynd(shots, eps, eps_i) == doctest::Approx(theta).epsilon(0.02));
    CHECK(estimate_agnostic(shots, eps_i) == doctest::Approx(theta).epsilon(0.02));
}

TEST_CASE("replica experiments are deterministic and thread invariant") {
    const SyndromeTable t = rep2_table(0.06);
    const auto a = run_agnostic_experiment(t, kZ1, 0.3, 2000, 40, 99, 1);
    const auto b = run_agnostic_experiment(t, kZ1, 0.3, 2000, 40, 99, 4);
    CHECK(a.estimate == b.estimate);
    CHECK(a.variance == b.variance);
    CHECK(a.crb == b.crb);
    const auto c = run_csynd_experiment(t, kZ1, 0.3, 2000, 40, 99, false, 1);
    const auto d = run_csynd_experiment(t, kZ1, 0.3, 2000, 40, 99, false, 4);
    CHECK(c.estimate == d.estimate);
    CHECK(c.variance == d.variance);
}

TEST_CASE("agnostic experiment attains its predicted variance") {
    const double q = 0.05, theta = 0.3;
    const SyndromeTable t = rep2_table(q);
    const auto r = run_agnostic_experiment(t, kZ1, theta, 20000, 400, 7, 0);
    CHECK(r.n == 20000);
    CHECK(r.replicas == 400);
    CHECK(std::abs(r.bias) < 5 * r.bias_se);
    // Predicted variance: inverse information of the pooled channel.
    const double eps_i = average_error_rate(t, kZ1);
    const double F = fisher_f(theta, eps_i);
    CHECK(r.crb == doctest::Approx(1.0 / (20000 * F)).epsilon(1e-10));
    CHECK(r.ratio == doctest::Approx(r.variance / r.crb));
    CHECK(r.ratio > 0.65);
    CHECK(r.ratio < 1.4);
}

TEST_CASE("conditioned experiment beats the agnostic variance") {
    const double q = 0.05, theta = 0.3;
    const SyndromeTable t = rep2_table(q);
    const std::int64_t n = 4000;
    const int reps = 3000;
    const auto ra = run_agnostic_experiment(t, kZ1, theta, n, reps, 11, 0);
    const auto rc = run_csynd_experiment(t, kZ1, theta, n, reps, 12, false, 0);
    CHECK(std::abs(rc.bias) < 5 * rc.bias_se);
    // Predicted variance uses the conditioned information sum.
    const double F = eps_csynd(t, kZ1, theta).fisher;
    CHECK(rc.crb == doctest::Approx(1.0 / (n * F)).epsilon(1e-10));
    CHECK(rc.ratio > 0.65);
    CHECK(rc.ratio < 1.4);
    // Distinctly below the agnostic variance (about 11% at these settings).
    CHECK(rc.variance < ra.variance);
}

TEST_CASE("shuffled labels destroy the conditioning advantage") {
    const double q = 0.05, theta = 0.3;
    const SyndromeTable t = rep2_table(q);
    const std::int64_t n = 4000;
    const int reps = 3000;
    const auto ra = run_agnostic_experiment(t, kZ1, theta, n, reps, 21, 0);
    const auto rs = run_csynd_experiment(t, kZ1, theta, n, reps, 22, true, 0);
    CHECK(std::abs(rs.bias) < 5 * rs.bias_se);
    // Variance degrades to the agnostic level: compare within 5 combined
    // standard errors of the replica variance estimates.
    const double se = std::sqrt(2.0 / (reps - 1)) *
                      std::max(ra.variance, rs.variance) * std::sqrt(2.0);
    CHECK(std::abs(rs.variance - ra.variance) < 5 * se);
    // And it is distinguishable from the honest conditioned variance.
    const auto rc = run_csynd_experiment(t, kZ1, theta, n, reps, 23, false, 0);
    CHECK(rc.variance < rs.variance);
}

TEST_CASE("quantum two-branch experiment is unbiased and near its bound") {
    Rng rng(73, 0);
    const BlochState psi = sample_haar(1, rng);
    const ClassLabel target = kZ1;
    const ClassLabel Q = make_label(1, 0, 1);
    for (InitMode mode : {InitMode::kOracle, InitMode::kRough}) {
        const auto r = run_quantum_experiment(psi, 0.15, Q, target, 10000, 300, mode, 31, 0);
        CAPTURE(static_cast<int>(mode));
        CHECK(std::abs(r.bias) < 5 * r.bias_se);
        CHECK(r.crb > 0);
        CHECK(r.ratio > 0.6);
        CHECK(r.ratio < 1.5);
    }
}

TEST_CASE("quantum experiment rejects invalid setups") {
    Rng rng(74, 0);
    const BlochState psi = sample_haar(1, rng);
    // Q must anticommute with the target.
    CHECK_THROWS(run_quantum_experiment(psi, 0.1, kZ1, kZ1, 100, 10, InitMode::kOracle, 1, 0));
    CHECK_THROWS(run_quantum_experiment(psi, -0.2, make_label(1, 0, 1), kZ1, 100, 10,
                                        InitMode::kOracle, 1, 0));
}

TEST_CASE("protocol csv helpers") {
    EstimatorResult r;
    r.estimate = 0.31;
    r.n = 1000;
    r.replicas = 10;
    const std::string line = protocol_csv_row("csynd", "rep2", 0.05, 0.3, r, 9);
    CHECK(protocol_csv_header().find("variance") != std::string::npos);
    CHECK(line.find("csynd") != std::string::npos);
    CHECK(line.find('\n') == std::string::npos);
}
