#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qec/linalg.hpp"
#include "qec/noise.hpp"

namespace qec {

// Probability that the decoded logical state carries a flip anticommuting
// with target, conditioned on syndrome s.
double conditional_error_rate(const SyndromeTable& table, std::uint64_t s,
                              ClassLabel target);

// Smallest class label anticommuting with target; the representative used to
// fold ML-flipped syndromes.
ClassLabel ml_flip_label(ClassLabel target, int k);

// Degenerate maximum-likelihood normalization for the target observable:
// syndromes with conditional rate > 1/2 get every class multiplied by the
// fixed flip representative. Ties are left alone.
SyndromeTable ml_normalize(const SyndromeTable& table, ClassLabel target);
SeriesTable ml_normalize(const SeriesTable& table, ClassLabel target);

// eps_i = sum_s p_s eps_{i,s}; the excluded mass is not counted (callers
// bound it separately).
double average_error_rate(const SyndromeTable& table, ClassLabel target);
EtaSeries average_error_rate(const SeriesTable& table, ClassLabel target);

// Contraction vector of the conditional channel: entry j-1 is
// 1 - 2 eps_{j,s} for nontrivial label j, signed sum over class masses.
Vec lambda_vector(const SyndromeTable& table, std::uint64_t s);
Vec lambda_vector_of_entry(const SyndromeTable::Entry& entry, int k);

// Merges syndromes into groups; class masses add, so conditional rates become
// probability-weighted means.
SyndromeTable coarse_grain(const SyndromeTable& table,
                           const std::function<std::uint64_t(std::uint64_t)>& group_of);

// One syndrome's leading-order data, enough to reconstruct its limiting
// conditional channel.
struct ClassifiedChannel {
    std::uint64_t s = 0;
    int order = 0;        // leading order of p_s
    double p_coeff = 0;   // leading coefficient of p_s
    // Leading-order class distribution (coefficients at `order`, nonzero only).
    std::vector<std::pair<ClassLabel, double>> class_coeffs;
    // S_Theta(eta) channels: minority-class coefficient at order+1.
    double minority_coeff = 0;
    ClassLabel minority_label = 0;
};

// Syndrome families that control the eta -> 0 limit of the effective rates:
// even d keeps order-d/2 syndromes with mixed classes at leading order; odd d
// keeps order-(d+1)/2 mixed syndromes plus order-(d-1)/2 syndromes whose
// minority class enters exactly one order later.
struct SyndromeClassification {
    int k = 0;
    int d = 0;
    std::vector<ClassifiedChannel> theta1;
    std::vector<ClassifiedChannel> theta_eta;
    std::vector<std::uint64_t> negligible;
};
SyndromeClassification classify_syndromes(const SeriesTable& table, ClassLabel target,
                                          int d);

}  // namespace qec
