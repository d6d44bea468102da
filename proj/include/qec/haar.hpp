#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qec/channels.hpp"
#include "qec/qfisher.hpp"
#include "qec/rng.hpp"

namespace qec {

// Monte Carlo mean with its standard error (sample stddev / sqrt(n)).
struct AveragedQuantity {
    double mean = 0;
    double se = 0;
    int n = 0;
};

// Haar-random k-qubit pure state: i.i.d. standard complex Gaussian
// amplitudes, normalized.
BlochState sample_haar(int k, Rng& rng);

// Haar mean of the syndrome contribution Delta_i for the channel
// (id + Q.Q)/2.  Q must anticommute with the target label.
AveragedQuantity lemma1_average(int k, ClassLabel Q, ClassLabel target, int n,
                                std::uint64_t seed, int threads = 0);

// Haar mean (and per-entry standard error) of the generalized Schur
// complement of the covariance on the Q-anticommuting block.
struct Prop3Result {
    Mat mean;
    Mat se;
    std::vector<int> j_minus;  // label-1 indices the blocks refer to
    int n = 0;
};
Prop3Result prop3_average(int k, ClassLabel Q, int n, std::uint64_t seed,
                          int threads = 0);

// Haar mean of limit_ratio_quantum over sampled logical states, with the
// structural check that every order-Theta(1) channel is a two-element coset
// {c, cQ} of equal leading mass with Q anticommuting with the target.  When
// the check fails the mean is still reported, flagged as a plain sweep.
struct Thm2Result {
    AveragedQuantity ratio;
    bool qualifies = false;
    std::string note;
};
Thm2Result thm2_ratio(const SyndromeClassification& cls, ClassLabel target, int n,
                      std::uint64_t seed, int threads = 0);

// Haar mean of Delta_i for the single-block channel
// (1-ex-ey-ez) id + ex X_1 + ey Y_1 + ez Z_1 acting on the first logical
// qubit, target Z_1, for each k in k_values.
struct Fig5Row {
    int k = 0;
    double ex = 0, ey = 0, ez = 0;
    double mean = 0;
    double se = 0;
    int n = 0;
};
std::vector<Fig5Row> fig5_sweep(const std::vector<int>& k_values, double ex, double ey,
                                double ez, int n, std::uint64_t seed, int threads = 0);

// Haar mean of the low-error-limit ratio eps_qsynd/eps_i for k-block product
// codes built from a catalog base code, target Z_1 under the named noise.
struct Fig6Row {
    std::string code;
    int k = 0;
    double mean = 0;
    double se = 0;
    int n = 0;
    bool qualifies = false;
};
std::vector<Fig6Row> fig6_sweep(const std::vector<std::string>& base_codes,
                                const std::vector<int>& k_values,
                                const std::string& noise_name, int n,
                                std::uint64_t seed, const std::string& data_dir = "",
                                int threads = 0);

// Pointwise Monte Carlo reduction helper shared by the sweeps: evaluates
// value(sample_index, state) over n Haar samples with per-sample RNG streams
// and a shard-ordered deterministic reduction.
AveragedQuantity haar_mean(int k, int n, std::uint64_t seed, int threads,
                           const std::function<double(int, const BlochState&)>& value);

std::string haar_csv_header();
std::string haar_csv_row(const std::string& quantity, int k, const std::string& param,
                         const AveragedQuantity& avg, std::uint64_t seed);

}  // namespace qec
