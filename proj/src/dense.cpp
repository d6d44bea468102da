#include "qec/dense.hpp"

#include <cmath>

#include "qec/rng.hpp"
#include "qec/util.hpp"

namespace qec {

namespace {

cd i_power(int a) {
    switch (a & 3) {
        case 0: return cd(1, 0);
        case 1: return cd(0, 1);
        case 2: return cd(-1, 0);
        default: return cd(0, -1);
    }
}

}  // namespace

CMat pauli_matrix(const PauliOp& p) {
    if (p.n > 7) throw ConfigError("dense Pauli matrix limited to 7 qubits");
    const int dim = 1 << p.n;
    CMat mat(dim);
    const cd phase = i_power(popcount64(p.x & p.z));
    for (int col = 0; col < dim; ++col) {
        const int row = col ^ int(p.x);
        const double sign = parity64(p.z & std::uint64_t(col)) ? -1.0 : 1.0;
        mat(row, col) = phase * sign;
    }
    return mat;
}

CMat logical_rep_matrix(const StabilizerCode& code, ClassLabel c) {
    const std::uint32_t xb = label_x(c, code.k);
    const std::uint32_t zb = label_z(c, code.k);
    CMat out = scale(CMat::identity(1 << code.n), i_power(popcount64(xb & zb)));
    for (int i = 0; i < code.k; ++i)
        if ((xb >> i) & 1) out = mul(out, pauli_matrix(code.logical_x[i]));
    for (int i = 0; i < code.k; ++i)
        if ((zb >> i) & 1) out = mul(out, pauli_matrix(code.logical_z[i]));
    return out;
}

CMat syndrome_projector(const StabilizerCode& code, std::uint64_t s) {
    const int dim = 1 << code.n;
    CMat out = CMat::identity(dim);
    for (int a = 0; a < code.m(); ++a) {
        const double sign = ((s >> a) & 1) ? -1.0 : 1.0;
        CMat factor = add(CMat::identity(dim), scale(pauli_matrix(code.generators[a]), sign));
        out = scale(mul(out, factor), 0.5);
    }
    return out;
}

CMat encoded_state(const StabilizerCode& code, const Vec& v) {
    const int dim = 1 << code.n;
    const int labels = (1 << (2 * code.k)) - 1;
    if (int(v.size()) != labels) throw ConfigError("Bloch vector has wrong length");
    CMat a = CMat::identity(dim);
    for (int j = 1; j <= labels; ++j)
        if (v[j - 1] != 0.0)
            a = add(a, scale(logical_rep_matrix(code, ClassLabel(j)), v[j - 1]));
    return scale(mul(syndrome_projector(code, 0), a), 1.0 / (1 << code.k));
}

Vec bloch_of_logical_state(const CMat& rho, int k) {
    const int labels = (1 << (2 * k)) - 1;
    Vec v(labels);
    for (int j = 1; j <= labels; ++j) {
        PauliOp p;
        p.x = label_x(ClassLabel(j), k);
        p.z = label_z(ClassLabel(j), k);
        p.n = k;
        v[j - 1] = trace(mul(rho, pauli_matrix(p))).real();
    }
    return v;
}

Vec random_pure_bloch(int k, std::uint64_t seed, std::uint64_t stream) {
    Rng rng(seed, stream);
    const int dim = 1 << k;
    std::vector<cd> psi(dim);
    double norm2 = 0;
    for (auto& c : psi) {
        c = cd(rng.normal(), rng.normal());
        norm2 += std::norm(c);
    }
    CMat rho(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) rho(i, j) = psi[i] * std::conj(psi[j]) / norm2;
    return bloch_of_logical_state(rho, k);
}

CMat apply_noise_channel(const CMat& rho, const NoiseModel& noise, int n) {
    CMat out = rho;
    for (int q = 0; q < n; ++q) {
        PauliOp x = PauliOp::identity(n), z = PauliOp::identity(n), y = PauliOp::identity(n);
        x.x = std::uint64_t(1) << q;
        z.z = std::uint64_t(1) << q;
        y.x = y.z = std::uint64_t(1) << q;
        const CMat mx = pauli_matrix(x), my = pauli_matrix(y), mz = pauli_matrix(z);
        CMat next = scale(out, noise.p[0]);
        next = add(next, scale(mul(mx, mul(out, mx)), noise.p[1]));
        next = add(next, scale(mul(my, mul(out, my)), noise.p[2]));
        next = add(next, scale(mul(mz, mul(out, mz)), noise.p[3]));
        out = next;
    }
    return out;
}

}  // namespace qec
