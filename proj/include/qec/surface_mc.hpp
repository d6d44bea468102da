#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qec/codes.hpp"
#include "qec/rng.hpp"

namespace qec {

// Weight larger than any path in the graphs handled here.
inline constexpr int kUnreachable = 1 << 28;

// Matching graph for bit-flip decoding of a rotated surface code from its
// Z-type generators. Nodes are the Z plaquettes (in generator order) plus a
// single boundary node; each data qubit is an edge joining the plaquettes it
// belongs to (or a plaquette and the boundary). An edge is "crossing" when
// the qubit lies on the logical-Z representative: the crossing parity of a
// correction is its logical class.
struct SurfaceGraph {
    int d = 0;
    int n = 0;           // data qubits, d*d
    int plaquettes = 0;  // Z-type generator count; boundary() == plaquettes

    std::vector<std::uint64_t> zmask;  // plaquette -> data-qubit support
    std::uint64_t cross_mask = 0;      // logical-Z support

    struct Edge {
        int a = 0, b = 0;  // endpoints; b may be the boundary
        int qubit = 0;
        int cross = 0;
    };
    std::vector<Edge> edges;                 // one per data qubit
    std::vector<std::vector<int>> adjacent;  // node -> incident edge indices

    // Parity-resolved shortest walks over states (node, crossing parity):
    // pdist[u][2*v+b] = fewest data qubits on a u -> v walk of parity b,
    // pedge[u][2*v+b] = arriving edge on one such walk (-1 at the source),
    // both kUnreachable/-1 when no walk exists.
    std::vector<std::vector<int>> pdist;
    std::vector<std::vector<int>> pedge;

    // Lightest odd-crossing closed walk (through the boundary); equals the
    // minimum weight of an X-type logical representative.
    int logical_weight = 0;

    int boundary() const { return plaquettes; }
    int nodes() const { return plaquettes + 1; }
};

SurfaceGraph build_surface_graph(int d);

// Defect bits: bit p = parity of the X pattern on plaquette p's support.
std::uint64_t surface_syndrome(const SurfaceGraph& g, std::uint64_t xmask);

// Crossing parity of an X pattern = its logical class (0 or 1).
int surface_class(const SurfaceGraph& g, std::uint64_t xmask);

// X pattern of a recorded minimal walk u -> v with crossing parity b.
std::uint64_t path_mask(const SurfaceGraph& g, int u, int v, int b);

// Exhaustive search for the lightest odd-crossing stabilizer-trivial X
// pattern, weight <= w_max; returns w_max + 1 when none exists. Independent
// check of SurfaceGraph::logical_weight.
int min_xonly_logical_weight(const SurfaceGraph& g, int w_max);

// One shot's matching problem: the violated plaquettes plus the
// parity-resolved shortest-path weights among them and the boundary.
struct MatchingInstance {
    int d = 0;
    std::uint64_t syndrome = 0;
    std::vector<int> defects;  // ascending plaquette indices
    bool overflow = false;     // defect count above the cap; weights empty
    // weight[i][j][b]: parity-b shortest-path weight between defects i and j;
    // index defects.size() is the boundary. Symmetric in (i, j).
    std::vector<std::vector<std::array<int, 2>>> weight;
};

MatchingInstance make_matching_instance(const SurfaceGraph& g, std::uint64_t syndrome,
                                        int defect_cap = 12);

// Exact minimum-weight decoding: exhaustive defect-pairing enumeration with
// branch-and-bound, each pair routed through either crossing parity, plus the
// option of one logical-weight loop to flip the total class.
struct DecodeResult {
    bool overflow = false;
    std::uint64_t correction = 0;  // X pattern attaining the chosen minimum
    int cls = 0;                   // crossing parity of the chosen class
    int gap = 0;                   // complementary minimum - chosen minimum
    int weight_chosen = 0;
    int weight_other = 0;
};

DecodeResult mwpm_decode(const SurfaceGraph& g, const MatchingInstance& inst);

// One decoded shot, keyed by its syndrome.
struct GapRecord {
    std::uint64_t syndrome = 0;
    int cls = 0;
    int gap = 0;
};

// Decodes every syndrome once (the syndrome space is at most 2^12 here);
// index = syndrome value. Deterministic for any thread count.
std::vector<DecodeResult> decode_all_syndromes(const SurfaceGraph& g,
                                               int defect_cap = 12, int threads = 0);

// Monte Carlo gap statistics. Shots are grouped by complementary gap;
// undersized groups are merged into a neighbor and reported.
struct GapGroup {
    int gap = 0;
    std::int64_t count = 0;
    std::int64_t errors = 0;  // decoder class != sampled class
    double p_hat = 0;
    double eps_hat = 0;
    double se = 0;              // binomial standard error of eps_hat
    std::vector<int> absorbed;  // gap values merged into this group
};

struct GapExperimentResult {
    int d = 0;
    double eta = 0;    // depolarizing strength; per-qubit flip rate 2*eta/3
    double theta = 0;  // target expectation used in the information sums
    std::int64_t shots = 0;
    std::int64_t used = 0;  // shots below the defect cap
    std::int64_t overflow = 0;
    std::uint64_t seed = 0;
    std::vector<GapGroup> groups;  // ascending gap, after merging
    std::vector<int> merged;       // every absorbed gap value

    double eps_i = 0;  // decoder error rate over used shots
    double se_eps_i = 0;
    double eps_csynd = 0;  // f_inv(theta, sum_g p_hat_g f(theta, eps_hat_g))
    double se_eps_csynd = 0;
    double ratio = 0;  // eps_csynd / eps_i
    double se_ratio = 0;
};

// Samples i.i.d. per-qubit flips at rate 2*eta/3 (the bit-flip marginal of
// depolarizing noise), decodes through a precomputed syndrome table, groups
// by gap, and propagates binomial errors into the ratio. Groups smaller than
// min_group are merged into their larger neighbor. Throws InfeasibleError
// when no decoding error is observed (ratio undefined).
GapExperimentResult run_gap_experiment(int d, double eta, std::int64_t shots,
                                       std::uint64_t seed, double theta = 0.0,
                                       int threads = 0, int defect_cap = 12,
                                       std::int64_t min_group = 50);

// Exhaustive (every X pattern, every syndrome) comparison of the matching
// decoder against per-syndrome maximum likelihood on the bit-flip marginal;
// d <= 4 keeps the pattern space at 2^16.
struct DecoderComparison {
    double eps_ml = 0;
    double eps_mwpm = 0;
};

DecoderComparison compare_decoders_exact(int d, double eta);

// Header: d,eta,gap,p_hat,eps_hat,se
std::string gap_csv_header();
std::string gap_csv_row(const GapExperimentResult& r, const GapGroup& g);
// Comment line with the summary statistics of one run.
std::string gap_csv_summary(const GapExperimentResult& r);

}  // namespace qec
