#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qec/pauli.hpp"

namespace qec {

// Label of a logical Pauli class on k logical qubits, packed as
// bits [0,k) = X part, bits [k,2k) = Z part. Class composition is XOR.
// The packed integer order defines "lexicographically smallest" wherever a
// canonical class representative is needed.
using ClassLabel = std::uint32_t;

inline ClassLabel make_label(std::uint32_t xbits, std::uint32_t zbits, int k) {
    return xbits | (zbits << k);
}
inline std::uint32_t label_x(ClassLabel c, int k) {
    return c & ((1u << k) - 1u);
}
inline std::uint32_t label_z(ClassLabel c, int k) { return c >> k; }

// 1 iff the two logical classes anticommute.
inline int label_anticommutes(ClassLabel a, ClassLabel b, int k) {
    return parity64((label_x(a, k) & label_z(b, k)) ^
                    (label_z(a, k) & label_x(b, k)));
}

std::string format_label(ClassLabel c, int k);

struct StabilizerCode {
    std::string name;
    int n = 0;
    int k = 0;
    int d = 0;
    std::vector<PauliOp> generators;     // m = n - k, pairwise commuting
    std::vector<PauliOp> destabilizers;  // <D_a, g_b> = (a == b)
    std::vector<PauliOp> logical_x;
    std::vector<PauliOp> logical_z;
    // Repetition codes declare their bit-flip distance; the minimum-weight
    // check then searches X-only representatives (see notes in catalog()).
    bool xonly_distance = false;

    int m() const { return n - k; }
};

// Syndrome as packed bits: bit a = anticommutation with generators[a].
std::uint64_t syndrome(const StabilizerCode& code, const PauliOp& error);

// Product of destabilizers selected by the syndrome bits; satisfies
// syndrome(code, canonical_recovery(code, s)) == s.
PauliOp canonical_recovery(const StabilizerCode& code, std::uint64_t s);

// Class of error * canonical_recovery(syndrome(error)): bit i of the X part
// is anticommutation with logical_z[i], Z part with logical_x[i].
ClassLabel logical_class(const StabilizerCode& code, const PauliOp& error);

// Class of an operator already commuting with every generator.
ClassLabel residual_class(const StabilizerCode& code, const PauliOp& residual);

// Raw anticommutation bits of p against the logical representatives, packed
// like a ClassLabel. Composes by XOR; logical_class(E) is pauli_label_bits(E)
// XORed with the bits of the destabilizers selected by E's syndrome.
ClassLabel pauli_label_bits(const StabilizerCode& code, const PauliOp& p);

// Completes generators+logicals into a full code: destabilizers by symplectic
// Gaussian elimination followed by symplectic Gram-Schmidt, then validation.
// check_distance additionally runs the weight-bounded representative search.
StabilizerCode make_code(std::string name, int d,
                         std::vector<PauliOp> generators,
                         std::vector<PauliOp> logical_x,
                         std::vector<PauliOp> logical_z,
                         bool xonly_distance = false,
                         bool check_distance = true);

// Throws ConfigError naming the violated invariant.
void validate_code(const StabilizerCode& code, bool check_distance);

// Smallest weight of a nontrivial logical representative, searching errors of
// weight <= w_max (X-only patterns when xonly). Returns w_max + 1 if none.
int min_logical_weight(const StabilizerCode& code, int w_max, bool xonly);

// Built-ins: "repetition:<d>", "rotated_surface:<d>" for d in {2,3,4,5},
// "perfect_513", "steane_713", "carbon" and "carbon_1214" (loaded from
// <data_dir>/codes/carbon.code). Aliases: "steane", "perfect",
// "surface<d>", "rep<d>".
StabilizerCode catalog(const std::string& name, const std::string& data_dir = "");

// Code-definition text: `d <int>` header (optional `name <str>`), then
// sections [stabilizers], [logical_x], [logical_z] with one Pauli per line.
StabilizerCode load_code(const std::string& path);
StabilizerCode parse_code_text(const std::string& text, const std::string& fallback_name);

// k disjoint copies of a one-logical-qubit code: [[n,1,d]] -> [[nk,k,d]].
StabilizerCode block_product(const StabilizerCode& code, int blocks);

// Fixes logical qubit i: logical_z[i] becomes a generator (its destabilizer
// is the old logical_x[i]); the logical pair is removed.
StabilizerCode promote_logical(const StabilizerCode& code, int i);

}  // namespace qec
