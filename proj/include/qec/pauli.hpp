#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qec/util.hpp"

namespace qec {

// Phaseless n-qubit Pauli operator in symplectic binary form. Qubit q carries
// X iff bit q of x is set, Z iff bit q of z is set, Y iff both. Global phases
// are dropped: nothing downstream depends on them.
inline constexpr int kMaxQubits = 64;

struct PauliOp {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    int n = 0;

    PauliOp() = default;
    PauliOp(std::uint64_t x_bits, std::uint64_t z_bits, int n_qubits)
        : x(x_bits), z(z_bits), n(n_qubits) {}

    static PauliOp identity(int n_qubits) { return PauliOp(0, 0, n_qubits); }

    bool operator==(const PauliOp&) const = default;

    int weight() const { return popcount64(x | z); }
    bool is_identity() const { return (x | z) == 0; }
};

// Symplectic inner product parity: 0 = commute, 1 = anticommute.
inline int symplectic(const PauliOp& p, const PauliOp& q) {
    return parity64((p.x & q.z) ^ (p.z & q.x));
}

bool commutes(const PauliOp& p, const PauliOp& q);

// Phaseless product: bitwise XOR of both components.
PauliOp prod(const PauliOp& p, const PauliOp& q);

// "IXYZ" text form; "" is the zero-qubit identity.
PauliOp parse_pauli(std::string_view s);
std::string format_pauli(const PauliOp& p);

// Shifts p onto qubits [offset, offset + p.n) of an n_total-qubit register.
PauliOp embed(const PauliOp& p, int n_total, int offset);

}  // namespace qec
