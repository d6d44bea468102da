#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qec/codes.hpp"

namespace qec {

// Uniform i.i.d. single-qubit Pauli channel. lead[] holds the coefficient of
// eta in each component's leading term, used by the symbolic back-end.
struct NoiseModel {
    double p[4] = {1, 0, 0, 0};  // I, X, Y, Z
    double lead[3] = {0, 0, 0};  // X, Y, Z
    double eta = 0;
    std::string name = "ideal";

    static NoiseModel depolarizing(double eta);
    static NoiseModel bitflip(double eta);
    std::string describe() const;
};

// Truncated power series in eta: sum of c[j]*eta^(order+j) plus O(eta^(order+kTerms)).
struct EtaSeries {
    static constexpr int kTerms = 3;
    bool is_zero = true;
    int order = 0;
    std::array<double, kTerms> c{};

    static EtaSeries zero() { return EtaSeries{}; }
    static EtaSeries monomial(int order, double coeff);
    double eval(double eta) const;
    double coeff(int ord) const;  // 0 outside the stored window
    double leading() const { return is_zero ? 0.0 : c[0]; }
};

EtaSeries add(const EtaSeries& a, const EtaSeries& b);
EtaSeries mul(const EtaSeries& a, const EtaSeries& b);
EtaSeries scale(const EtaSeries& a, double x);
// Sign of a - b as eta -> 0+ (first differing coefficient decides).
int series_compare(const EtaSeries& a, const EtaSeries& b);

template <class MassT>
struct BasicSyndromeTable {
    struct Entry {
        std::uint64_t s = 0;
        MassT total{};
        // Sorted by label; absent labels carry zero mass.
        std::vector<std::pair<ClassLabel, MassT>> classes;
    };

    std::string code_name;
    std::string noise_name;
    int n = 0, k = 0, m = 0, d = 0;
    double eta = 0;
    bool zonly = false;
    int w_cut = -1;  // enumeration weight bound; -1 = exhaustive
    double excluded_mass = 0;
    std::vector<Entry> entries;  // sorted by syndrome key

    const Entry* find(std::uint64_t s) const;
    MassT class_mass(const Entry& e, ClassLabel c) const;
};

using SyndromeTable = BasicSyndromeTable<double>;
using SeriesTable = BasicSyndromeTable<EtaSeries>;

template <class MassT>
const typename BasicSyndromeTable<MassT>::Entry*
BasicSyndromeTable<MassT>::find(std::uint64_t s) const {
    auto it = std::lower_bound(
        entries.begin(), entries.end(), s,
        [](const Entry& e, std::uint64_t key) { return e.s < key; });
    if (it == entries.end() || it->s != s) return nullptr;
    return &*it;
}

template <class MassT>
MassT BasicSyndromeTable<MassT>::class_mass(const Entry& e, ClassLabel c) const {
    auto it = std::lower_bound(
        e.classes.begin(), e.classes.end(), c,
        [](const std::pair<ClassLabel, MassT>& p, ClassLabel key) { return p.first < key; });
    if (it == e.classes.end() || it->first != c) return MassT{};
    return it->second;
}

// All 4^n Pauli errors (n <= 12), bucketed by (syndrome, logical class).
// Deterministic for any thread count.
SyndromeTable enumerate_exact(const StabilizerCode& code, const NoiseModel& noise,
                              int threads = 1);

// Errors of weight <= w_cut; the rest is reported as excluded_mass.
SyndromeTable enumerate_truncated(const StabilizerCode& code, const NoiseModel& noise,
                                  int w_cut);

// Leading-order symbolic table over weight <= w_max errors: a weight-w error
// contributes its component-coefficient product at order w, the (1-eta)^(n-w)
// factor contributing 1 at leading order.
SeriesTable enumerate_leading(const StabilizerCode& code, const NoiseModel& noise,
                              int w_max);

// Bit-flip marginal decoded with Z-type generators only (CSS, k = 1): errors
// are X patterns with per-qubit flip probability p_X + p_Y.
SyndromeTable enumerate_exact_zonly(const StabilizerCode& code, const NoiseModel& noise);
SeriesTable enumerate_leading_zonly(const StabilizerCode& code, const NoiseModel& noise,
                                    int w_max);

// Evaluates a series table at its eta (entries and totals), for cross-checks
// against the exact back-end.
SyndromeTable evaluate_series_table(const SeriesTable& table, double eta);

std::string table_to_json(const SyndromeTable& table);
SyndromeTable table_from_json(const std::string& text);

// Dense-matrix cross-check of enumerate_exact (n <= 7): encodes a random
// logical pure state, applies the channel as an explicit Kraus sum, projects
// onto syndrome sectors, and compares sector weights and per-sector logical
// Bloch contractions against the table.
struct SectorOracleReport {
    double max_weight_diff = 0;
    double max_contraction_diff = 0;
    int sectors = 0;
};
SectorOracleReport syndrome_sector_oracle(const StabilizerCode& code,
                                          const NoiseModel& noise,
                                          std::uint64_t seed);

}  // namespace qec
