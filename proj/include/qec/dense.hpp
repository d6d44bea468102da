#pragma once

#include <cstdint>
#include <vector>

#include "qec/codes.hpp"
#include "qec/linalg.hpp"
#include "qec/noise.hpp"

namespace qec {

// Matrix of the Hermitian Pauli i^{|x AND z|} X^x Z^z on p.n qubits.
CMat pauli_matrix(const PauliOp& p);

// Hermitian representative of logical class c: i^{|x AND z|} times the
// ordered product of logical X then logical Z representatives.
CMat logical_rep_matrix(const StabilizerCode& code, ClassLabel c);

// Projector onto the syndrome-s sector, product of (I +- g_a)/2.
CMat syndrome_projector(const StabilizerCode& code, std::uint64_t s);

// Encoded state with logical Bloch vector v (index j-1 for label j):
// (code projector) * (I + sum_j v_j P_j) / 2^k.
CMat encoded_state(const StabilizerCode& code, const Vec& v);

// Bloch vector of a logical state on k qubits (v[j-1] = tr[rho sigma_j]).
Vec bloch_of_logical_state(const CMat& rho, int k);

// Bloch vector of a random pure state on k qubits.
Vec random_pure_bloch(int k, std::uint64_t seed, std::uint64_t stream);

// i.i.d. single-qubit Pauli channel as an explicit Kraus sum.
CMat apply_noise_channel(const CMat& rho, const NoiseModel& noise, int n);

}  // namespace qec
