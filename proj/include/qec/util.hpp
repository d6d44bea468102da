#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace qec {

// Invalid user input: bad code file, unknown name, out-of-range parameter.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request is well-formed but cannot be satisfied: enumeration too large,
// classification assumptions violated, defect cap exceeded, singular matrix.
// The CLI maps this to exit code 3.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int popcount64(std::uint64_t v) { return __builtin_popcountll(v); }
inline int parity64(std::uint64_t v) { return __builtin_parityll(v); }

// Runs worker(shard) for shard = 0..num_shards-1 on up to `threads` threads.
// Shards are claimed dynamically, so workers must only write shard-local
// state; callers merge results in shard order to stay deterministic.
void run_sharded(std::size_t num_shards, int threads,
                 const std::function<void(std::size_t)>& worker);

// Shard bounds for splitting `total` items into `num_shards` near-equal
// contiguous ranges: [shard_begin(i), shard_begin(i+1)).
inline std::uint64_t shard_begin(std::uint64_t total, std::size_t num_shards,
                                 std::size_t shard) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(total) * shard) / num_shards);
}

// Fixed shard count used by all enumerators/samplers. Results are reduced in
// shard-index order, so output is independent of the thread count.
inline constexpr std::size_t kNumShards = 256;

// Shortest decimal form that round-trips a double; used for all file output
// so reruns are byte-identical.
std::string format_double(double v);

}  // namespace qec
