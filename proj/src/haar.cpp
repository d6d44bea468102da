#include "qec/haar.hpp"

#include <cmath>
#include <sstream>

#include "qec/codes.hpp"
#include "qec/fisher.hpp"
#include "qec/util.hpp"

namespace qec {

BlochState sample_haar(int k, Rng& rng) {
    if (k < 1) throw ConfigError("sample_haar: k must be >= 1");
    std::vector<cd> amp(std::size_t(1) << k);
    double norm2 = 0.0;
    for (auto& a : amp) {
        a = cd(rng.normal(), rng.normal());
        norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amp) a *= inv;
    return bloch_from_state(amp);
}

AveragedQuantity haar_mean(int k, int n, std::uint64_t seed, int threads,
                           const std::function<double(int, const BlochState&)>& value) {
    if (n < 2) throw ConfigError("haar_mean: need at least 2 samples");
    struct Acc {
        double sum = 0, sumsq = 0;
    };
    std::vector<Acc> acc(kNumShards);
    run_sharded(kNumShards, threads, [&](std::size_t shard) {
        const std::uint64_t b = shard_begin(n, kNumShards, shard);
        const std::uint64_t e = shard_begin(n, kNumShards, shard + 1);
        for (std::uint64_t t = b; t < e; ++t) {
            Rng rng(seed, t);
            const BlochState st = sample_haar(k, rng);
            const double v = value(static_cast<int>(t), st);
            acc[shard].sum += v;
            acc[shard].sumsq += v * v;
        }
    });
    double sum = 0, sumsq = 0;
    for (const auto& a : acc) {
        sum += a.sum;
        sumsq += a.sumsq;
    }
    AveragedQuantity out;
    out.n = n;
    out.mean = sum / n;
    double var = (sumsq - sum * sum / n) / (n - 1);
    if (var < 0) var = 0;
    out.se = std::sqrt(var / n);
    return out;
}

AveragedQuantity lemma1_average(int k, ClassLabel Q, ClassLabel target, int n,
                                std::uint64_t seed, int threads) {
    if (!label_anticommutes(Q, target, k))
        throw ConfigError("lemma1_average: Q must anticommute with the target");
    return haar_mean(k, n, seed, threads, [&](int, const BlochState& st) {
        return delta_contribution_projector(st, Q, target);
    });
}

Prop3Result prop3_average(int k, ClassLabel Q, int n, std::uint64_t seed, int threads) {
    if (Q == 0) throw ConfigError("prop3_average: Q must be nontrivial");
    const int labels = (1 << (2 * k)) - 1;
    std::vector<int> plus, minus;
    for (int j = 1; j <= labels; ++j) {
        if (label_anticommutes(static_cast<ClassLabel>(j), Q, k)) minus.push_back(j - 1);
        else plus.push_back(j - 1);
    }
    const int nm = static_cast<int>(minus.size());
    struct Acc {
        Mat sum, sumsq;
    };
    std::vector<Acc> acc(kNumShards, Acc{Mat(nm, nm), Mat(nm, nm)});
    run_sharded(kNumShards, threads, [&](std::size_t shard) {
        const std::uint64_t b = shard_begin(n, kNumShards, shard);
        const std::uint64_t e = shard_begin(n, kNumShards, shard + 1);
        for (std::uint64_t t = b; t < e; ++t) {
            Rng rng(seed, t);
            const BlochState st = sample_haar(k, rng);
            const Mat C = covariance_from_bloch(st.theta, k);
            const Mat S = schur_complement_minus(C, plus, minus);
            for (int a = 0; a < nm; ++a)
                for (int bcol = 0; bcol < nm; ++bcol) {
                    acc[shard].sum(a, bcol) += S(a, bcol);
                    acc[shard].sumsq(a, bcol) += S(a, bcol) * S(a, bcol);
                }
        }
    });
    Prop3Result out;
    out.n = n;
    out.j_minus = minus;
    out.mean = Mat(nm, nm);
    out.se = Mat(nm, nm);
    Mat sum(nm, nm), sumsq(nm, nm);
    for (const auto& a : acc) {
        sum = add(sum, a.sum);
        sumsq = add(sumsq, a.sumsq);
    }
    for (int a = 0; a < nm; ++a)
        for (int b = 0; b < nm; ++b) {
            out.mean(a, b) = sum(a, b) / n;
            double var = (sumsq(a, b) - sum(a, b) * sum(a, b) / n) / (n - 1);
            if (var < 0) var = 0;
            out.se(a, b) = std::sqrt(var / n);
        }
    return out;
}

Thm2Result thm2_ratio(const SyndromeClassification& cls, ClassLabel target, int n,
                      std::uint64_t seed, int threads) {
    Thm2Result out;
    out.qualifies = true;
    if (cls.d % 2 != 0) {
        out.qualifies = false;
        out.note = "distance is odd; reporting a plain sweep";
    }
    if (cls.theta1.empty()) {
        out.qualifies = false;
        out.note = "no order-Theta(1) syndromes";
    }
    for (const auto& ch : cls.theta1) {
        if (!lemma1_form(ch, target, cls.k)) {
            out.qualifies = false;
            out.note = "a dominant syndrome channel is not a balanced {c, cQ} coset";
            break;
        }
    }
    out.ratio = haar_mean(cls.k, n, seed, threads, [&](int, const BlochState& st) {
        return limit_ratio_quantum(cls, st, target);
    });
    return out;
}

std::vector<Fig5Row> fig5_sweep(const std::vector<int>& k_values, double ex, double ey,
                                double ez, int n, std::uint64_t seed, int threads) {
    if (ex < 0 || ey < 0 || ez < 0 || ex + ey + ez > 1.0 + 1e-12)
        throw ConfigError("fig5_sweep: channel probabilities invalid");
    std::vector<Fig5Row> rows;
    for (int k : k_values) {
        if (k < 1) throw ConfigError("fig5_sweep: k must be >= 1");
        const int labels = (1 << (2 * k)) - 1;
        const ClassLabel cx = 1;                      // X on first logical qubit
        const ClassLabel cz = 1u << k;                // Z on first logical qubit
        const ClassLabel cy = cx | cz;
        const ClassLabel target = cz;
        Vec lambda(labels, 0.0);
        const double p0 = 1.0 - ex - ey - ez;
        for (int j = 1; j <= labels; ++j) {
            const auto lj = static_cast<ClassLabel>(j);
            double acc = p0;
            acc += ex * (label_anticommutes(cx, lj, k) ? -1.0 : 1.0);
            acc += ey * (label_anticommutes(cy, lj, k) ? -1.0 : 1.0);
            acc += ez * (label_anticommutes(cz, lj, k) ? -1.0 : 1.0);
            lambda[j - 1] = acc;
        }
        const AveragedQuantity avg =
            haar_mean(k, n, seed, threads, [&](int, const BlochState& st) {
                return delta_contribution(lambda, st, target, 0.0);
            });
        Fig5Row row;
        row.k = k;
        row.ex = ex;
        row.ey = ey;
        row.ez = ez;
        row.mean = avg.mean;
        row.se = avg.se;
        row.n = avg.n;
        rows.push_back(row);
    }
    return rows;
}

std::vector<Fig6Row> fig6_sweep(const std::vector<std::string>& base_codes,
                                const std::vector<int>& k_values,
                                const std::string& noise_name, int n,
                                std::uint64_t seed, const std::string& data_dir,
                                int threads) {
    NoiseModel noise;
    if (noise_name == "depolarizing") noise = NoiseModel::depolarizing(1e-3);
    else if (noise_name == "bitflip") noise = NoiseModel::bitflip(1e-3);
    else throw ConfigError("fig6_sweep: unknown noise model " + noise_name);

    std::vector<Fig6Row> rows;
    for (const auto& name : base_codes) {
        const StabilizerCode base = catalog(name, data_dir);
        if (base.k != 1) throw ConfigError("fig6_sweep: base code must have k = 1");
        for (int k : k_values) {
            const StabilizerCode code = block_product(base, k);
            const int w_max = (base.d + 1) / 2;
            SeriesTable lead = enumerate_leading(code, noise, w_max);
            const ClassLabel target = 1u << k;  // Z on the first block
            lead = ml_normalize(lead, target);
            const SyndromeClassification cls = classify_syndromes(lead, target, base.d);
            const Thm2Result res = thm2_ratio(cls, target, n, seed, threads);
            Fig6Row row;
            row.code = name;
            row.k = k;
            row.mean = res.ratio.mean;
            row.se = res.ratio.se;
            row.n = res.ratio.n;
            row.qualifies = res.qualifies;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string haar_csv_header() { return "quantity,k,param,mean,se,n,seed"; }

std::string haar_csv_row(const std::string& quantity, int k, const std::string& param,
                         const AveragedQuantity& avg, std::uint64_t seed) {
    std::ostringstream os;
    os << quantity << ',' << k << ',' << param << ',' << format_double(avg.mean) << ','
       << format_double(avg.se) << ',' << avg.n << ',' << seed;
    return os.str();
}

}  // namespace qec
