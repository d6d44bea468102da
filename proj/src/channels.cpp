#include "qec/channels.hpp"

#include <algorithm>
#include <map>

#include "qec/util.hpp"

namespace qec {

double conditional_error_rate(const SyndromeTable& table, std::uint64_t s,
                              ClassLabel target) {
    const auto* e = table.find(s);
    if (!e) throw ConfigError("syndrome not present in table");
    if (e->total <= 0) throw ConfigError("syndrome has zero probability");
    double anti = 0;
    for (const auto& [c, mass] : e->classes)
        if (label_anticommutes(c, target, table.k)) anti += mass;
    return anti / e->total;
}

ClassLabel ml_flip_label(ClassLabel target, int k) {
    const ClassLabel count = ClassLabel(1) << (2 * k);
    for (ClassLabel r = 1; r < count; ++r)
        if (label_anticommutes(r, target, k)) return r;
    throw ConfigError("target label is trivial");
}

namespace {

template <class MassT>
void split_masses(const typename BasicSyndromeTable<MassT>::Entry& e, ClassLabel target,
                  int k, MassT& commuting, MassT& anticommuting);

template <>
void split_masses<double>(const SyndromeTable::Entry& e, ClassLabel target, int k,
                          double& commuting, double& anticommuting) {
    commuting = anticommuting = 0;
    for (const auto& [c, mass] : e.classes)
        (label_anticommutes(c, target, k) ? anticommuting : commuting) += mass;
}

template <>
void split_masses<EtaSeries>(const SeriesTable::Entry& e, ClassLabel target, int k,
                             EtaSeries& commuting, EtaSeries& anticommuting) {
    commuting = anticommuting = EtaSeries::zero();
    for (const auto& [c, mass] : e.classes) {
        auto& slot = label_anticommutes(c, target, k) ? anticommuting : commuting;
        slot = add(slot, mass);
    }
}

bool mass_greater(double a, double b) { return a > b; }
bool mass_greater(const EtaSeries& a, const EtaSeries& b) {
    return series_compare(a, b) > 0;
}

template <class MassT>
BasicSyndromeTable<MassT> ml_normalize_impl(const BasicSyndromeTable<MassT>& table,
                                            ClassLabel target) {
    const ClassLabel flip = ml_flip_label(target, table.k);
    BasicSyndromeTable<MassT> out = table;
    for (auto& e : out.entries) {
        MassT com, anti;
        split_masses<MassT>(e, target, table.k, com, anti);
        if (!mass_greater(anti, com)) continue;
        for (auto& [c, mass] : e.classes) c ^= flip;
        std::sort(e.classes.begin(), e.classes.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    return out;
}

}  // namespace

SyndromeTable ml_normalize(const SyndromeTable& table, ClassLabel target) {
    return ml_normalize_impl(table, target);
}

SeriesTable ml_normalize(const SeriesTable& table, ClassLabel target) {
    return ml_normalize_impl(table, target);
}

double average_error_rate(const SyndromeTable& table, ClassLabel target) {
    double sum = 0;
    for (const auto& e : table.entries)
        for (const auto& [c, mass] : e.classes)
            if (label_anticommutes(c, target, table.k)) sum += mass;
    return sum;
}

EtaSeries average_error_rate(const SeriesTable& table, ClassLabel target) {
    EtaSeries sum = EtaSeries::zero();
    for (const auto& e : table.entries)
        for (const auto& [c, mass] : e.classes)
            if (label_anticommutes(c, target, table.k)) sum = add(sum, mass);
    return sum;
}

Vec lambda_vector_of_entry(const SyndromeTable::Entry& entry, int k) {
    const int labels = (1 << (2 * k)) - 1;
    double total = 0;
    for (const auto& [c, mass] : entry.classes) total += mass;
    Vec lam(labels, 0.0);
    for (int j = 1; j <= labels; ++j) {
        double signed_sum = 0;
        for (const auto& [c, mass] : entry.classes)
            signed_sum += label_anticommutes(c, ClassLabel(j), k) ? -mass : mass;
        lam[j - 1] = signed_sum / total;
    }
    return lam;
}

Vec lambda_vector(const SyndromeTable& table, std::uint64_t s) {
    const auto* e = table.find(s);
    if (!e) throw ConfigError("syndrome not present in table");
    if (e->total <= 0) throw ConfigError("syndrome has zero probability");
    return lambda_vector_of_entry(*e, table.k);
}

SyndromeTable coarse_grain(const SyndromeTable& table,
                           const std::function<std::uint64_t(std::uint64_t)>& group_of) {
    std::map<std::uint64_t, std::map<ClassLabel, double>> acc;
    for (const auto& e : table.entries) {
        auto& slot = acc[group_of(e.s)];
        for (const auto& [c, mass] : e.classes) slot[c] += mass;
    }
    SyndromeTable out = table;
    out.entries.clear();
    for (const auto& [g, classes] : acc) {
        SyndromeTable::Entry e;
        e.s = g;
        for (const auto& [c, mass] : classes) {
            e.classes.emplace_back(c, mass);
            e.total += mass;
        }
        out.entries.push_back(std::move(e));
    }
    return out;
}

SyndromeClassification classify_syndromes(const SeriesTable& table, ClassLabel target,
                                          int d) {
    const int needed = (d + 1) / 2;
    if (table.w_cut >= 0 && table.w_cut < needed)
        throw ConfigError("leading table was built with w_max below (d+1)/2");
    const bool even = d % 2 == 0;
    const int l_one = even ? d / 2 : (d + 1) / 2;
    const int l_eta = even ? -1 : (d - 1) / 2;

    SyndromeClassification out;
    out.k = table.k;
    out.d = d;
    for (const auto& e : table.entries) {
        if (e.total.is_zero) continue;
        const int ls = e.total.order;
        EtaSeries com, anti;
        split_masses<EtaSeries>(e, target, table.k, com, anti);
        const bool com_leads = !com.is_zero && com.order == ls;
        const bool anti_leads = !anti.is_zero && anti.order == ls;

        if (ls == l_one && com_leads && anti_leads) {
            ClassifiedChannel ch;
            ch.s = e.s;
            ch.order = ls;
            ch.p_coeff = e.total.c[0];
            for (const auto& [c, mass] : e.classes) {
                const double coeff = mass.coeff(ls);
                if (coeff != 0.0) ch.class_coeffs.emplace_back(c, coeff);
            }
            out.theta1.push_back(std::move(ch));
            continue;
        }
        if (!even && ls == l_eta) {
            // Exactly one side leads (two same-syndrome errors of weight
            // (d-1)/2 in different classes would give a weight < d logical).
            const EtaSeries& minority = com_leads ? anti : com;
            if (!minority.is_zero && minority.order == ls + 1) {
                ClassifiedChannel ch;
                ch.s = e.s;
                ch.order = ls;
                ch.p_coeff = e.total.c[0];
                for (const auto& [c, mass] : e.classes) {
                    const double coeff = mass.coeff(ls);
                    if (coeff != 0.0) ch.class_coeffs.emplace_back(c, coeff);
                }
                ch.minority_coeff = minority.c[0];
                for (const auto& [c, mass] : e.classes)
                    if (!mass.is_zero && mass.order == ls + 1 &&
                        (label_anticommutes(c, target, table.k) != 0) == com_leads) {
                        ch.minority_label = c;
                        break;
                    }
                out.theta_eta.push_back(std::move(ch));
                continue;
            }
        }
        out.negligible.push_back(e.s);
    }
    return out;
}

}  // namespace qec
