#include "qec/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qec/channels.hpp"
#include "qec/fisher.hpp"
#include "qec/util.hpp"

namespace qec {

namespace {

// Cumulative syndrome distribution over table entries.
Vec entry_cumulative(const SyndromeTable& table) {
    Vec cum;
    cum.reserve(table.entries.size());
    double acc = 0.0;
    for (const auto& e : table.entries) {
        double p = 0.0;
        for (const auto& [label, mass] : e.classes) p += mass;
        acc += p;
        cum.push_back(acc);
    }
    if (std::abs(acc - 1.0) > 1e-9)
        throw ConfigError("sample_shots: table mass does not sum to 1 (truncated?)");
    return cum;
}

std::size_t draw_index(const Vec& cum, Rng& rng) {
    const double u = rng.uniform() * cum.back();
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    return static_cast<std::size_t>(it - cum.begin());
}

struct ReplicaStats {
    double sum = 0, sumsq = 0;
};

EstimatorResult reduce_replicas(const std::vector<ReplicaStats>& acc, double theta,
                                double crb, std::int64_t n, int replicas) {
    double sum = 0, sumsq = 0;
    for (const auto& a : acc) {
        sum += a.sum;
        sumsq += a.sumsq;
    }
    EstimatorResult out;
    out.n = n;
    out.replicas = replicas;
    out.estimate = sum / replicas;
    out.bias = out.estimate - theta;
    double var = (sumsq - sum * sum / replicas) / (replicas - 1);
    if (var < 0) var = 0;
    out.variance = var;
    out.bias_se = std::sqrt(var / replicas);
    out.crb = crb;
    out.ratio = crb > 0 ? var / crb : 0.0;
    return out;
}

}  // namespace

std::vector<ShotRecord> sample_shots(const SyndromeTable& table, ClassLabel target,
                                     double theta, std::int64_t n, Rng& rng) {
    const Vec cum = entry_cumulative(table);
    const Vec eps = entry_error_rates(table, target);
    std::vector<ShotRecord> shots(static_cast<std::size_t>(n));
    for (auto& sh : shots) {
        const std::size_t s = draw_index(cum, rng);
        const double p_plus = 0.5 * (1.0 + (1.0 - 2.0 * eps[s]) * theta);
        sh.entry = static_cast<std::uint32_t>(s);
        sh.x = rng.uniform() < p_plus ? 1 : -1;
    }
    return shots;
}

Vec entry_error_rates(const SyndromeTable& table, ClassLabel target) {
    Vec eps(table.entries.size(), 0.0);
    for (std::size_t s = 0; s < table.entries.size(); ++s)
        eps[s] = conditional_error_rate(table, s, target);
    return eps;
}

double estimate_agnostic(const std::vector<ShotRecord>& shots, double eps_i) {
    if (eps_i >= 0.5) throw ConfigError("estimate_agnostic: eps_i must be below 1/2");
    double sum = 0.0;
    for (const auto& sh : shots) sum += sh.x;
    return sum / (static_cast<double>(shots.size()) * (1.0 - 2.0 * eps_i));
}

double estimate_csynd(const std::vector<ShotRecord>& shots, const Vec& entry_eps,
                      double eps_i) {
    const std::int64_t n = static_cast<std::int64_t>(shots.size());
    const auto n1 = static_cast<std::int64_t>(std::floor(std::sqrt(double(n))));
    if (n1 < 1 || n - n1 < 1)
        throw ConfigError("estimate_csynd: too few shots for the two-stage split");

    std::vector<ShotRecord> stage1(shots.begin(), shots.begin() + n1);
    const double theta_init = estimate_agnostic(stage1, eps_i);

    // Weighted rescaled mean: each term f(eps_s) * x/(1-2 eps_s) stays finite
    // at eps_s = 1/2 when assembled as (1-2eps) x / (1-(1-2eps)^2 theta^2).
    const double t2 = theta_init * theta_init;
    double num = 0.0, den = 0.0;
    for (std::int64_t j = n1; j < n; ++j) {
        const double l = 1.0 - 2.0 * entry_eps[shots[j].entry];
        const double d = 1.0 - l * l * t2;
        num += l * shots[j].x / d;
        den += l * l / d;
    }
    if (den <= 0.0)
        throw InfeasibleError("estimate_csynd: all stage-2 shots carry zero weight");
    return num / den;
}

EstimatorResult run_agnostic_experiment(const SyndromeTable& table, ClassLabel target,
                                        double theta, std::int64_t n, int replicas,
                                        std::uint64_t seed, int threads) {
    if (replicas < 2) throw ConfigError("need at least 2 replicas");
    const double eps_i = average_error_rate(table, target);
    std::vector<ReplicaStats> acc(static_cast<std::size_t>(replicas));
    run_sharded(kNumShards, threads, [&](std::size_t shard) {
        const std::uint64_t b = shard_begin(replicas, kNumShards, shard);
        const std::uint64_t e = shard_begin(replicas, kNumShards, shard + 1);
        for (std::uint64_t r = b; r < e; ++r) {
            Rng rng(seed, r);
            const auto shots = sample_shots(table, target, theta, n, rng);
            const double est = estimate_agnostic(shots, eps_i);
            acc[r].sum = est;
            acc[r].sumsq = est * est;
        }
    });
    const double crb = 1.0 / (static_cast<double>(n) * fisher_f(theta, eps_i));
    return reduce_replicas(acc, theta, crb, n, replicas);
}

EstimatorResult run_csynd_experiment(const SyndromeTable& table, ClassLabel target,
                                     double theta, std::int64_t n, int replicas,
                                     std::uint64_t seed, bool shuffle_control,
                                     int threads) {
    if (replicas < 2) throw ConfigError("need at least 2 replicas");
    const double eps_i = average_error_rate(table, target);
    Vec eps = entry_error_rates(table, target);
    if (shuffle_control) {
        // Once labels are shuffled they carry no information, so the honest
        // conditional flip rate of every group is the average rate.
        std::fill(eps.begin(), eps.end(), eps_i);
    }
    std::vector<ReplicaStats> acc(static_cast<std::size_t>(replicas));
    run_sharded(kNumShards, threads, [&](std::size_t shard) {
        const std::uint64_t b = shard_begin(replicas, kNumShards, shard);
        const std::uint64_t e = shard_begin(replicas, kNumShards, shard + 1);
        for (std::uint64_t r = b; r < e; ++r) {
            Rng rng(seed, r);
            auto shots = sample_shots(table, target, theta, n, rng);
            if (shuffle_control) {
                // Fisher-Yates on the syndrome labels only; outcomes keep
                // their marginal law but lose all syndrome correlation.
                for (std::size_t j = shots.size(); j > 1; --j) {
                    const std::size_t l = rng.below(j);
                    std::swap(shots[j - 1].entry, shots[l].entry);
                }
            }
            const double est = estimate_csynd(shots, eps, eps_i);
            acc[r].sum = est;
            acc[r].sumsq = est * est;
        }
    });
    const double f_synd = eps_csynd(table, target, theta).fisher;
    const double crb = 1.0 / (static_cast<double>(n) * f_synd);
    return reduce_replicas(acc, theta, crb, n, replicas);
}

namespace {

// Outcome sampler for a Hermitian observable in its eigenbasis: outcome a has
// probability <a|rho|a>.
struct BornSampler {
    Vec values;  // eigenvalues
    Vec cum;     // cumulative probabilities

    double draw(Rng& rng) const {
        const double u = rng.uniform() * cum.back();
        const auto it = std::lower_bound(cum.begin(), cum.end(), u);
        return values[static_cast<std::size_t>(it - cum.begin())];
    }
};

CMat observable_from_coeffs(const Vec& coeffs, int k) {
    const int dim = 1 << k;
    CMat M(dim);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] == 0.0) continue;
        const CMat P = dense_pauli(static_cast<ClassLabel>(j + 1), k);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) M(a, b) += coeffs[j] * P(a, b);
    }
    return M;
}

BornSampler make_sampler(const CMat& observable, const CMat& rho) {
    const HermEig eg = herm_eig(observable);
    const int dim = observable.n;
    BornSampler out;
    out.values = eg.values;
    out.cum.resize(dim);
    double acc = 0.0;
    for (int a = 0; a < dim; ++a) {
        cd q = 0.0;
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                q += std::conj(eg.vectors(r, a)) * rho(r, c) * eg.vectors(c, a);
        acc += std::max(0.0, q.real());
        out.cum[a] = acc;
    }
    return out;
}

CMat pure_density(const std::vector<cd>& amp) {
    const int dim = static_cast<int>(amp.size());
    CMat rho(dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) rho(a, b) = amp[a] * std::conj(amp[b]);
    return rho;
}

double contract(const Vec& coeffs, const Vec& theta) {
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * theta[j];
    return acc;
}

}  // namespace

EstimatorResult run_quantum_experiment(const BlochState& psi, double p, ClassLabel Q,
                                       ClassLabel target, std::int64_t n, int replicas,
                                       InitMode mode, std::uint64_t seed, int threads) {
    if (replicas < 2) throw ConfigError("need at least 2 replicas");
    if (psi.k > 3) throw ConfigError("run_quantum_experiment: k capped at 3");
    if (psi.amplitudes.empty())
        throw ConfigError("run_quantum_experiment: need state amplitudes");
    if (p > 0.0 && !label_anticommutes(Q, target, psi.k))
        throw ConfigError("run_quantum_experiment: Q must anticommute with the target");
    const int k = psi.k;
    const int labels = (1 << (2 * k)) - 1;
    const auto n1 = static_cast<std::int64_t>(std::floor(std::sqrt(double(n))));
    if (n - n1 < 1) throw ConfigError("run_quantum_experiment: too few shots");

    // Branch-1 state rho(Lambda_Q theta).
    Vec ltheta = psi.theta;
    for (int j = 1; j <= labels; ++j)
        if (label_anticommutes(static_cast<ClassLabel>(j), Q, k)) ltheta[j - 1] = 0.0;
    const CMat rho0 = pure_density(psi.amplitudes);
    const CMat rho1 = density_from_bloch(ltheta, k);

    // CRB from the closed-form inverse (exact at theta_init = theta).
    const double crb_entry =
        p > 0.0
            ? simplified_state_suite(psi, p, Q, target).j_synd_inverse(
                  static_cast<int>(target) - 1, static_cast<int>(target) - 1)
            : covariance_from_bloch(psi.theta, k)(static_cast<int>(target) - 1,
                                                  static_cast<int>(target) - 1);
    const double crb = crb_entry / static_cast<double>(n);

    std::vector<ReplicaStats> acc(static_cast<std::size_t>(replicas));
    run_sharded(kNumShards, threads, [&](std::size_t shard) {
        const std::uint64_t rb = shard_begin(replicas, kNumShards, shard);
        const std::uint64_t re = shard_begin(replicas, kNumShards, shard + 1);
        for (std::uint64_t r = rb; r < re; ++r) {
            Rng rng(seed, r);

            // Stage 1: rough tomography on syndrome-0 copies (or the oracle).
            Vec theta_init = psi.theta;
            if (mode == InitMode::kRough) {
                Vec sum(labels, 0.0);
                std::vector<std::int64_t> cnt(labels, 0);
                for (std::int64_t t = 0; t < n1; ++t) {
                    const int j = static_cast<int>(t % labels);
                    const bool noisy = rng.uniform() < p;
                    if (noisy) continue;  // branch-1 copies are discarded here
                    const double pj = 0.5 * (1.0 + psi.theta[j]);
                    sum[j] += rng.uniform() < pj ? 1.0 : -1.0;
                    ++cnt[j];
                }
                for (int j = 0; j < labels; ++j)
                    theta_init[j] = cnt[j] > 0 ? sum[j] / cnt[j] : 0.0;
            }

            // Measurement operators built at theta_init.
            Vec m0(labels, 0.0), m1(labels, 0.0);
            if (p > 0.0) {
                const auto suite = simplified_state_suite(
                    bloch_from_theta(theta_init, k), p, Q, target);
                m0 = suite.meas_branch0;
                m1 = suite.meas_branch1;
            } else {
                m0[static_cast<int>(target) - 1] = 1.0;
            }
            const BornSampler s0 = make_sampler(observable_from_coeffs(m0, k), rho0);
            const BornSampler s1 =
                p > 0.0 ? make_sampler(observable_from_coeffs(m1, k), rho1)
                        : BornSampler{};
            const double c0 = contract(m0, theta_init);
            const double c1 = contract(m1, theta_init);

            double dsum = 0.0;
            const std::int64_t n2 = n - n1;
            for (std::int64_t t = 0; t < n2; ++t) {
                if (p > 0.0 && rng.uniform() < p) {
                    dsum += s1.draw(rng) - c1;
                } else {
                    dsum += (s0.draw(rng) - c0) / (1.0 - p);
                }
            }
            const double est =
                theta_init[static_cast<int>(target) - 1] + dsum / static_cast<double>(n2);
            acc[r].sum = est;
            acc[r].sumsq = est * est;
        }
    });
    return reduce_replicas(acc, psi.theta[static_cast<int>(target) - 1], crb, n,
                           replicas);
}

std::string protocol_csv_header() {
    return "protocol,system,eta,theta,N,bias,var,crb,ratio,seed";
}

std::string protocol_csv_row(const std::string& protocol, const std::string& system,
                             double eta, double theta, const EstimatorResult& r,
                             std::uint64_t seed) {
    std::ostringstream os;
    os << protocol << ',' << system << ',' << format_double(eta) << ','
       << format_double(theta) << ',' << r.n << ',' << format_double(r.bias) << ','
       << format_double(r.variance) << ',' << format_double(r.crb) << ','
       << format_double(r.ratio) << ',' << seed;
    return os.str();
}

}  // namespace qec
