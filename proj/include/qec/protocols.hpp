#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qec/noise.hpp"
#include "qec/qfisher.hpp"
#include "qec/rng.hpp"

namespace qec {

// One logical measurement: the syndrome (as an index into table.entries) and
// the +/-1 outcome of measuring the target logical Pauli.
struct ShotRecord {
    std::uint32_t entry = 0;
    std::int8_t x = 1;
};

// Draws (s, x) pairs from the joint law p_s * (1 + x (1-2 eps_{i,s}) theta)/2.
// The table must account for (numerically) all probability mass.
std::vector<ShotRecord> sample_shots(const SyndromeTable& table, ClassLabel target,
                                     double theta, std::int64_t n, Rng& rng);

// Conditional flip rates indexed like table.entries; convenience for the
// estimators below.
Vec entry_error_rates(const SyndromeTable& table, ClassLabel target);

// Syndrome-agnostic estimator: mean of x / (1 - 2 eps_i).
double estimate_agnostic(const std::vector<ShotRecord>& shots, double eps_i);

// Two-stage syndrome-aware estimator: the first floor(sqrt(N)) shots build a
// rough agnostic estimate theta_init, the rest are combined with weights
// proportional to f_{theta_init}(eps_{i,s}).  Shots with eps = 1/2
// contribute zero weight.
double estimate_csynd(const std::vector<ShotRecord>& shots, const Vec& entry_eps,
                      double eps_i);

// Aggregate over independent replicas of an N-shot experiment.
struct EstimatorResult {
    double estimate = 0;  // mean estimate over replicas
    double bias = 0;      // estimate - true theta
    double bias_se = 0;   // standard error of the mean estimate
    double variance = 0;  // sample variance of the estimate over replicas
    double crb = 0;       // predicted variance: 1/(N * matching Fisher quantity)
    double ratio = 0;     // variance / crb
    std::int64_t n = 0;
    int replicas = 0;
};

EstimatorResult run_agnostic_experiment(const SyndromeTable& table, ClassLabel target,
                                        double theta, std::int64_t n, int replicas,
                                        std::uint64_t seed, int threads = 0);

// shuffle_control permutes the syndrome labels within each replica before
// estimating, destroying the x-s correlation; the estimator then carries no
// syndrome information (falsification control).
EstimatorResult run_csynd_experiment(const SyndromeTable& table, ClassLabel target,
                                     double theta, std::int64_t n, int replicas,
                                     std::uint64_t seed, bool shuffle_control = false,
                                     int threads = 0);

// Stage-1 handling for the quantum two-step protocol: kOracle uses the true
// Bloch vector (isolates the asymptotic variance claim); kRough estimates
// every parameter by cycling Pauli measurements over the stage-1 budget.
enum class InitMode { kOracle, kRough };

// Simulates the two-branch protocol on the state (1-p)|0><0| (x) |psi><psi| +
// p|1><1| (x) rho(Lambda_Q theta): branch 0 measures (P_i - p O_i)/(1-p)
// against its theta_init expectation, branch 1 measures O_i, and the
// estimate is theta_init_i plus the mean shift.  CRB is the closed-form
// e_i^T (J^Synd)^{-1} e_i / N.  k <= 3.
EstimatorResult run_quantum_experiment(const BlochState& psi, double p, ClassLabel Q,
                                       ClassLabel target, std::int64_t n, int replicas,
                                       InitMode mode, std::uint64_t seed,
                                       int threads = 0);

std::string protocol_csv_header();
std::string protocol_csv_row(const std::string& protocol, const std::string& system,
                             double eta, double theta, const EstimatorResult& r,
                             std::uint64_t seed);

}  // namespace qec
