#include "qec/surface_mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <string>

#include "qec/fisher.hpp"
#include "qec/noise.hpp"
#include "qec/util.hpp"

namespace qec {

SurfaceGraph build_surface_graph(int d) {
    const StabilizerCode code = catalog("rotated_surface:" + std::to_string(d));
    SurfaceGraph g;
    g.d = d;
    g.n = code.n;
    for (const auto& gen : code.generators)
        if (gen.x == 0 && gen.z != 0) g.zmask.push_back(gen.z);
    g.plaquettes = static_cast<int>(g.zmask.size());
    g.cross_mask = code.logical_z[0].z;

    g.adjacent.assign(g.nodes(), {});
    for (int q = 0; q < g.n; ++q) {
        const std::uint64_t bit = std::uint64_t(1) << q;
        std::vector<int> owners;
        for (int p = 0; p < g.plaquettes; ++p)
            if (g.zmask[p] & bit) owners.push_back(p);
        if (owners.empty() || owners.size() > 2)
            throw InfeasibleError("data qubit not on one or two Z plaquettes");
        SurfaceGraph::Edge e;
        e.a = owners[0];
        e.b = owners.size() == 2 ? owners[1] : g.boundary();
        e.qubit = q;
        e.cross = (g.cross_mask & bit) ? 1 : 0;
        const int idx = static_cast<int>(g.edges.size());
        g.edges.push_back(e);
        g.adjacent[e.a].push_back(idx);
        g.adjacent[e.b].push_back(idx);
    }

    // Breadth-first search from every node over (node, parity) states; all
    // edges have weight 1 (one data qubit).
    const int states = 2 * g.nodes();
    g.pdist.assign(g.nodes(), std::vector<int>(states, kUnreachable));
    g.pedge.assign(g.nodes(), std::vector<int>(states, -1));
    for (int u = 0; u < g.nodes(); ++u) {
        auto& dist = g.pdist[u];
        auto& from = g.pedge[u];
        std::deque<int> queue;
        dist[2 * u] = 0;
        queue.push_back(2 * u);
        while (!queue.empty()) {
            const int st = queue.front();
            queue.pop_front();
            const int v = st / 2, b = st % 2;
            for (const int ei : g.adjacent[v]) {
                const auto& e = g.edges[ei];
                const int w = e.a == v ? e.b : e.a;
                const int next = 2 * w + (b ^ e.cross);
                if (dist[next] != kUnreachable) continue;
                dist[next] = dist[st] + 1;
                from[next] = ei;
                queue.push_back(next);
            }
        }
    }
    g.logical_weight = g.pdist[g.boundary()][2 * g.boundary() + 1];
    if (g.logical_weight >= kUnreachable)
        throw InfeasibleError("matching graph has no odd-crossing loop");
    return g;
}

std::uint64_t surface_syndrome(const SurfaceGraph& g, std::uint64_t xmask) {
    std::uint64_t s = 0;
    for (int p = 0; p < g.plaquettes; ++p)
        s |= std::uint64_t(parity64(xmask & g.zmask[p])) << p;
    return s;
}

int surface_class(const SurfaceGraph& g, std::uint64_t xmask) {
    return parity64(xmask & g.cross_mask);
}

std::uint64_t path_mask(const SurfaceGraph& g, int u, int v, int b) {
    if (g.pdist[u][2 * v + b] >= kUnreachable)
        throw InfeasibleError("no walk with the requested parity");
    std::uint64_t mask = 0;
    int node = v, parity = b;
    while (node != u || parity != 0) {
        const int ei = g.pedge[u][2 * node + parity];
        const auto& e = g.edges[ei];
        mask ^= std::uint64_t(1) << e.qubit;
        node = e.a == node ? e.b : e.a;
        parity ^= e.cross;
    }
    return mask;
}

int min_xonly_logical_weight(const SurfaceGraph& g, int w_max) {
    for (int w = 1; w <= std::min(w_max, g.n); ++w) {
        std::uint64_t mask = (std::uint64_t(1) << w) - 1;
        const std::uint64_t limit = std::uint64_t(1) << g.n;
        while (mask < limit) {
            if (surface_syndrome(g, mask) == 0 && surface_class(g, mask) == 1)
                return w;
            // Gosper's hack: next mask with the same popcount.
            const std::uint64_t c = mask & -mask;
            const std::uint64_t r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    return w_max + 1;
}

MatchingInstance make_matching_instance(const SurfaceGraph& g, std::uint64_t syndrome,
                                        int defect_cap) {
    MatchingInstance inst;
    inst.d = g.d;
    inst.syndrome = syndrome;
    for (int p = 0; p < g.plaquettes; ++p)
        if ((syndrome >> p) & 1) inst.defects.push_back(p);
    if (static_cast<int>(inst.defects.size()) > defect_cap) {
        inst.overflow = true;
        return inst;
    }
    const int m = static_cast<int>(inst.defects.size());
    std::vector<int> nodes = inst.defects;
    nodes.push_back(g.boundary());
    inst.weight.assign(m + 1, std::vector<std::array<int, 2>>(
                                  m + 1, {kUnreachable, kUnreachable}));
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j)
            for (int b = 0; b < 2; ++b)
                inst.weight[i][j][b] = g.pdist[nodes[i]][2 * nodes[j] + b];
    return inst;
}

namespace {

// Exhaustive enumeration of defect pairings (any subset matched to the
// boundary), each pair routed with either crossing parity. Branch-and-bound
// on the cheapest remaining attachment per defect.
struct PairingSearch {
    const MatchingInstance& inst;
    int m;  // defect count; boundary weight index == m
    std::array<int, 2> best{kUnreachable, kUnreachable};
    std::array<std::vector<std::array<int, 3>>, 2> best_pairs;  // (i, j|-1, b)
    std::vector<std::array<int, 3>> current;
    std::vector<int> cheapest;  // per defect: lightest attachment weight

    explicit PairingSearch(const MatchingInstance& instance)
        : inst(instance), m(static_cast<int>(instance.defects.size())) {
        cheapest.assign(m, kUnreachable);
        for (int i = 0; i < m; ++i) {
            int c = std::min(inst.weight[i][m][0], inst.weight[i][m][1]);
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                c = std::min({c, inst.weight[i][j][0], inst.weight[i][j][1]});
            }
            cheapest[i] = c;
        }
    }

    void run() { recurse(0u, 0, 0); }

    void recurse(unsigned matched, int weight, int parity) {
        int bound = 0;
        for (int i = 0; i < m; ++i)
            if (!((matched >> i) & 1)) bound += cheapest[i];
        if (weight + bound / 2 >= std::max(best[0], best[1])) return;
        if (matched == (1u << m) - 1u || m == 0) {
            if (weight < best[parity]) {
                best[parity] = weight;
                best_pairs[parity] = current;
            }
            return;
        }
        int i = 0;
        while ((matched >> i) & 1) ++i;
        for (int b = 0; b < 2; ++b) {
            if (inst.weight[i][m][b] >= kUnreachable) continue;
            current.push_back({i, -1, b});
            recurse(matched | (1u << i), weight + inst.weight[i][m][b], parity ^ b);
            current.pop_back();
        }
        for (int j = i + 1; j < m; ++j) {
            if ((matched >> j) & 1) continue;
            for (int b = 0; b < 2; ++b) {
                if (inst.weight[i][j][b] >= kUnreachable) continue;
                current.push_back({i, j, b});
                recurse(matched | (1u << i) | (1u << j),
                        weight + inst.weight[i][j][b], parity ^ b);
                current.pop_back();
            }
        }
    }
};

}  // namespace

DecodeResult mwpm_decode(const SurfaceGraph& g, const MatchingInstance& inst) {
    DecodeResult out;
    if (inst.overflow) {
        out.overflow = true;
        return out;
    }
    PairingSearch search(inst);
    search.run();

    // Class minima: pairings of the right total parity, or of the opposite
    // parity completed by one lightest odd-crossing loop.
    std::array<int, 2> minimum;
    std::array<bool, 2> via_loop;
    for (int p = 0; p < 2; ++p) {
        minimum[p] = search.best[p];
        via_loop[p] = false;
        if (search.best[p ^ 1] < kUnreachable &&
            search.best[p ^ 1] + g.logical_weight < minimum[p]) {
            minimum[p] = search.best[p ^ 1] + g.logical_weight;
            via_loop[p] = true;
        }
    }
    if (minimum[0] >= kUnreachable && minimum[1] >= kUnreachable)
        throw InfeasibleError("no pairing covers the defect set");

    out.cls = minimum[1] < minimum[0] ? 1 : 0;
    out.weight_chosen = minimum[out.cls];
    out.weight_other = minimum[out.cls ^ 1];
    out.gap = out.weight_other >= kUnreachable ? kUnreachable
                                               : out.weight_other - out.weight_chosen;

    const int source = via_loop[out.cls] ? (out.cls ^ 1) : out.cls;
    const int boundary = g.boundary();
    for (const auto& pr : search.best_pairs[source]) {
        const int u = inst.defects[pr[0]];
        const int v = pr[1] < 0 ? boundary : inst.defects[pr[1]];
        out.correction ^= path_mask(g, u, v, pr[2]);
    }
    if (via_loop[out.cls])
        out.correction ^= path_mask(g, boundary, boundary, 1);
    return out;
}

std::vector<DecodeResult> decode_all_syndromes(const SurfaceGraph& g, int defect_cap,
                                               int threads) {
    const std::uint64_t total = std::uint64_t(1) << g.plaquettes;
    std::vector<DecodeResult> table(total);
    run_sharded(kNumShards, threads, [&](std::size_t shard) {
        const std::uint64_t lo = shard_begin(total, kNumShards, shard);
        const std::uint64_t hi = shard_begin(total, kNumShards, shard + 1);
        for (std::uint64_t s = lo; s < hi; ++s)
            table[s] = mwpm_decode(g, make_matching_instance(g, s, defect_cap));
    });
    return table;
}

namespace {

struct ShardHistogram {
    std::vector<std::int64_t> count;
    std::vector<std::int64_t> errors;
    std::int64_t overflow = 0;
};

}  // namespace

GapExperimentResult run_gap_experiment(int d, double eta, std::int64_t shots,
                                       std::uint64_t seed, double theta, int threads,
                                       int defect_cap, std::int64_t min_group) {
    if (shots <= 0) throw ConfigError("shot count must be positive");
    if (eta < 0 || eta > 0.75) throw ConfigError("eta out of range");
    const SurfaceGraph g = build_surface_graph(d);
    const std::vector<DecodeResult> decoded = decode_all_syndromes(g, defect_cap, threads);
    const double flip = 2.0 * eta / 3.0;  // bit-flip marginal of depolarizing

    // The complementary gap never exceeds one logical loop.
    const int max_gap = g.logical_weight;
    std::vector<ShardHistogram> hist(kNumShards);
    run_sharded(kNumShards, threads, [&](std::size_t shard) {
        auto& h = hist[shard];
        h.count.assign(max_gap + 1, 0);
        h.errors.assign(max_gap + 1, 0);
        Rng rng(seed, shard);
        const std::int64_t lo = static_cast<std::int64_t>(
            shard_begin(std::uint64_t(shots), kNumShards, shard));
        const std::int64_t hi = static_cast<std::int64_t>(
            shard_begin(std::uint64_t(shots), kNumShards, shard + 1));
        for (std::int64_t t = lo; t < hi; ++t) {
            std::uint64_t mask = 0;
            for (int q = 0; q < g.n; ++q)
                if (rng.uniform() < flip) mask |= std::uint64_t(1) << q;
            const std::uint64_t s = surface_syndrome(g, mask);
            const DecodeResult& rec = decoded[s];
            if (rec.overflow) {
                ++h.overflow;
                continue;
            }
            ++h.count[rec.gap];
            if (rec.cls != surface_class(g, mask)) ++h.errors[rec.gap];
        }
    });

    GapExperimentResult out;
    out.d = d;
    out.eta = eta;
    out.theta = theta;
    out.shots = shots;
    out.seed = seed;
    std::vector<std::int64_t> count(max_gap + 1, 0), errors(max_gap + 1, 0);
    for (const auto& h : hist) {
        out.overflow += h.overflow;
        for (int gap = 0; gap <= max_gap; ++gap) {
            count[gap] += h.count.empty() ? 0 : h.count[gap];
            errors[gap] += h.errors.empty() ? 0 : h.errors[gap];
        }
    }
    out.used = shots - out.overflow;
    if (out.used <= 0) throw InfeasibleError("every shot exceeded the defect cap");

    for (int gap = 0; gap <= max_gap; ++gap) {
        if (count[gap] == 0) continue;
        GapGroup grp;
        grp.gap = gap;
        grp.count = count[gap];
        grp.errors = errors[gap];
        out.groups.push_back(grp);
    }

    // Merge undersized groups into their larger neighbor until all groups
    // meet the threshold (or one group remains).
    while (out.groups.size() > 1) {
        int victim = -1;
        for (int i = 0; i < static_cast<int>(out.groups.size()); ++i) {
            if (out.groups[i].count >= min_group) continue;
            if (victim < 0 || out.groups[i].count < out.groups[victim].count)
                victim = i;
        }
        if (victim < 0) break;
        int neighbor;
        if (victim == 0)
            neighbor = 1;
        else if (victim + 1 == static_cast<int>(out.groups.size()))
            neighbor = victim - 1;
        else
            neighbor = out.groups[victim - 1].count >= out.groups[victim + 1].count
                           ? victim - 1
                           : victim + 1;
        GapGroup& dst = out.groups[neighbor];
        GapGroup& src = out.groups[victim];
        dst.count += src.count;
        dst.errors += src.errors;
        dst.absorbed.push_back(src.gap);
        dst.absorbed.insert(dst.absorbed.end(), src.absorbed.begin(), src.absorbed.end());
        out.merged.push_back(src.gap);
        out.merged.insert(out.merged.end(), src.absorbed.begin(), src.absorbed.end());
        out.groups.erase(out.groups.begin() + victim);
    }
    std::sort(out.merged.begin(), out.merged.end());
    for (auto& grp : out.groups) std::sort(grp.absorbed.begin(), grp.absorbed.end());

    // Group statistics and the information sum.
    const double used = static_cast<double>(out.used);
    double information = 0;
    std::int64_t total_errors = 0;
    for (auto& grp : out.groups) {
        grp.p_hat = static_cast<double>(grp.count) / used;
        grp.eps_hat = static_cast<double>(grp.errors) / static_cast<double>(grp.count);
        grp.se = std::sqrt(std::max(0.0, grp.eps_hat * (1.0 - grp.eps_hat)) /
                           static_cast<double>(grp.count));
        information += grp.p_hat * fisher_f(theta, grp.eps_hat);
        total_errors += grp.errors;
    }
    out.eps_i = static_cast<double>(total_errors) / used;
    out.se_eps_i = std::sqrt(std::max(0.0, out.eps_i * (1.0 - out.eps_i)) / used);
    if (total_errors == 0)
        throw InfeasibleError("no decoding errors observed; increase shots or eta");

    out.eps_csynd = fisher_f_inv(theta, information);

    // Delta-method variance of the information sum: the multinomial part over
    // group frequencies plus the binomial part of each group rate.
    double var_information = 0;
    double second_moment = 0;
    for (const auto& grp : out.groups) {
        const double f = fisher_f(theta, grp.eps_hat);
        second_moment += grp.p_hat * f * f;
        const double u = 1.0 - 2.0 * grp.eps_hat;
        const double denom = 1.0 - u * u * theta * theta;
        const double dfde = -4.0 * u / (denom * denom);
        var_information += grp.p_hat * grp.p_hat * dfde * dfde *
                           std::max(0.0, grp.eps_hat * (1.0 - grp.eps_hat)) /
                           static_cast<double>(grp.count);
    }
    var_information += std::max(0.0, second_moment - information * information) / used;
    double se_csynd = 0;
    if (information > 0) {
        const double ratio_u = information / (1.0 + information * theta * theta);
        const double dedF = 1.0 / (4.0 * std::sqrt(ratio_u) *
                                   (1.0 + information * theta * theta) *
                                   (1.0 + information * theta * theta));
        se_csynd = dedF * std::sqrt(var_information);
    }
    out.se_eps_csynd = se_csynd;

    out.ratio = out.eps_csynd / out.eps_i;
    const double rel_c = out.eps_csynd > 0 ? out.se_eps_csynd / out.eps_csynd : 0;
    const double rel_i = out.se_eps_i / out.eps_i;
    out.se_ratio = out.ratio * std::sqrt(rel_c * rel_c + rel_i * rel_i);
    return out;
}

DecoderComparison compare_decoders_exact(int d, double eta) {
    if (d < 2 || d > 4)
        throw ConfigError("exhaustive decoder comparison limited to d <= 4");
    const StabilizerCode code = catalog("rotated_surface:" + std::to_string(d));
    const SurfaceGraph g = build_surface_graph(d);
    const std::vector<DecodeResult> decoded = decode_all_syndromes(g);
    const SyndromeTable table =
        enumerate_exact_zonly(code, NoiseModel::depolarizing(eta));

    DecoderComparison out;
    for (const auto& entry : table.entries) {
        const double keep = table.class_mass(entry, 0);
        const double flip = table.class_mass(entry, 1);
        out.eps_ml += std::min(keep, flip);
        out.eps_mwpm += decoded[entry.s].cls == 0 ? flip : keep;
    }
    return out;
}

std::string gap_csv_header() { return "d,eta,gap,p_hat,eps_hat,se"; }

std::string gap_csv_row(const GapExperimentResult& r, const GapGroup& grp) {
    std::ostringstream os;
    os << r.d << ',' << format_double(r.eta) << ',' << grp.gap << ','
       << format_double(grp.p_hat) << ',' << format_double(grp.eps_hat) << ','
       << format_double(grp.se);
    return os.str();
}

std::string gap_csv_summary(const GapExperimentResult& r) {
    std::ostringstream os;
    os << "# summary d=" << r.d << " eta=" << format_double(r.eta)
       << " theta=" << format_double(r.theta) << " shots=" << r.shots
       << " used=" << r.used << " overflow=" << r.overflow
       << " eps_i=" << format_double(r.eps_i) << " se_eps_i=" << format_double(r.se_eps_i)
       << " eps_csynd=" << format_double(r.eps_csynd)
       << " se_eps_csynd=" << format_double(r.se_eps_csynd)
       << " ratio=" << format_double(r.ratio) << " se_ratio=" << format_double(r.se_ratio);
    if (!r.merged.empty()) {
        os << " merged=";
        for (std::size_t i = 0; i < r.merged.size(); ++i)
            os << (i ? "+" : "") << r.merged[i];
    }
    return os.str();
}

}  // namespace qec
