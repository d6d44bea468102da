#include "qec/pauli.hpp"

#include <cstdio>

namespace qec {

namespace {

void require_same_n(const PauliOp& p, const PauliOp& q) {
    if (p.n != q.n) {
        throw ConfigError("Pauli qubit-count mismatch: " + std::to_string(p.n) +
                          " vs " + std::to_string(q.n));
    }
}

}  // namespace

bool commutes(const PauliOp& p, const PauliOp& q) {
    require_same_n(p, q);
    return symplectic(p, q) == 0;
}

PauliOp prod(const PauliOp& p, const PauliOp& q) {
    require_same_n(p, q);
    return PauliOp(p.x ^ q.x, p.z ^ q.z, p.n);
}

PauliOp parse_pauli(std::string_view s) {
    if (s.size() > kMaxQubits) {
        throw ConfigError("Pauli string longer than " +
                          std::to_string(kMaxQubits) + " qubits");
    }
    PauliOp p(0, 0, static_cast<int>(s.size()));
    for (std::size_t q = 0; q < s.size(); ++q) {
        std::uint64_t bit = 1ULL << q;
        switch (s[q]) {
            case 'I': break;
            case 'X': p.x |= bit; break;
            case 'Z': p.z |= bit; break;
            case 'Y': p.x |= bit; p.z |= bit; break;
            default:
                throw ConfigError(std::string("invalid Pauli character '") +
                                  s[q] + "' in \"" + std::string(s) + "\"");
        }
    }
    return p;
}

std::string format_pauli(const PauliOp& p) {
    std::string s(static_cast<std::size_t>(p.n), 'I');
    for (int q = 0; q < p.n; ++q) {
        bool xb = (p.x >> q) & 1;
        bool zb = (p.z >> q) & 1;
        if (xb && zb) s[static_cast<std::size_t>(q)] = 'Y';
        else if (xb) s[static_cast<std::size_t>(q)] = 'X';
        else if (zb) s[static_cast<std::size_t>(q)] = 'Z';
    }
    return s;
}

PauliOp embed(const PauliOp& p, int n_total, int offset) {
    if (offset < 0 || offset + p.n > n_total || n_total > kMaxQubits) {
        throw ConfigError("embed: target range out of bounds");
    }
    return PauliOp(p.x << offset, p.z << offset, n_total);
}

}  // namespace qec
