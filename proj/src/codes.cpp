#include "qec/codes.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qec/util.hpp"

#ifndef QEC_DATA_DIR
#define QEC_DATA_DIR ""
#endif

namespace qec {

std::string format_label(ClassLabel c, int k) {
    PauliOp p;
    p.x = label_x(c, k);
    p.z = label_z(c, k);
    p.n = k;
    return format_pauli(p);
}

std::uint64_t syndrome(const StabilizerCode& code, const PauliOp& error) {
    std::uint64_t s = 0;
    for (std::size_t a = 0; a < code.generators.size(); ++a)
        s |= std::uint64_t(symplectic(error, code.generators[a])) << a;
    return s;
}

PauliOp canonical_recovery(const StabilizerCode& code, std::uint64_t s) {
    PauliOp r = PauliOp::identity(code.n);
    for (std::size_t a = 0; a < code.destabilizers.size(); ++a)
        if ((s >> a) & 1) r = prod(r, code.destabilizers[a]);
    return r;
}

ClassLabel pauli_label_bits(const StabilizerCode& code, const PauliOp& p) {
    std::uint32_t xb = 0, zb = 0;
    for (int i = 0; i < code.k; ++i) {
        xb |= std::uint32_t(symplectic(p, code.logical_z[i])) << i;
        zb |= std::uint32_t(symplectic(p, code.logical_x[i])) << i;
    }
    return make_label(xb, zb, code.k);
}

ClassLabel residual_class(const StabilizerCode& code, const PauliOp& residual) {
    return pauli_label_bits(code, residual);
}

ClassLabel logical_class(const StabilizerCode& code, const PauliOp& error) {
    const std::uint64_t s = syndrome(code, error);
    ClassLabel c = pauli_label_bits(code, error);
    for (std::size_t a = 0; a < code.destabilizers.size(); ++a)
        if ((s >> a) & 1) c ^= pauli_label_bits(code, code.destabilizers[a]);
    return c;
}

namespace {

int getbit2n(std::uint64_t x, std::uint64_t z, int n, int col) {
    return col < n ? int((x >> col) & 1) : int((z >> (col - n)) & 1);
}

void setbit2n(std::uint64_t& x, std::uint64_t& z, int n, int col) {
    if (col < n)
        x |= std::uint64_t(1) << col;
    else
        z |= std::uint64_t(1) << (col - n);
}

// Solves <v_a, g_b> = (a == b) over GF(2); the symplectic form makes row b's
// coefficient vector (g_b.z | g_b.x).
std::vector<PauliOp> solve_destabilizers(const std::vector<PauliOp>& gens, int n) {
    struct Row {
        std::uint64_t x, z, rhs;
    };
    const int m = int(gens.size());
    std::vector<Row> rows(m);
    for (int b = 0; b < m; ++b)
        rows[b] = Row{gens[b].z, gens[b].x, std::uint64_t(1) << b};

    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < 2 * n && rank < m; ++col) {
        int pivot = -1;
        for (int r = rank; r < m; ++r)
            if (getbit2n(rows[r].x, rows[r].z, n, col)) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = 0; r < m; ++r)
            if (r != rank && getbit2n(rows[r].x, rows[r].z, n, col)) {
                rows[r].x ^= rows[rank].x;
                rows[r].z ^= rows[rank].z;
                rows[r].rhs ^= rows[rank].rhs;
            }
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank < m) throw ConfigError("stabilizer generators are not independent");

    std::vector<PauliOp> dest(m);
    for (int a = 0; a < m; ++a) {
        PauliOp v = PauliOp::identity(n);
        for (int r = 0; r < m; ++r)
            if ((rows[r].rhs >> a) & 1) setbit2n(v.x, v.z, n, pivot_col[r]);
        dest[a] = v;
    }
    return dest;
}

std::uint64_t next_same_weight(std::uint64_t v) {
    const std::uint64_t t = v | (v - 1);
    return (t + 1) | (((~t & (t + 1)) - 1) >> (__builtin_ctzll(v) + 1));
}

}  // namespace

int min_logical_weight(const StabilizerCode& code, int w_max, bool xonly) {
    const std::uint64_t limit = code.n >= 64 ? ~std::uint64_t(0)
                                             : (std::uint64_t(1) << code.n);
    for (int w = 1; w <= w_max; ++w) {
        if (w > code.n) break;
        std::uint64_t mask = (std::uint64_t(1) << w) - 1;
        while (mask < limit) {
            if (xonly) {
                PauliOp e;
                e.x = mask;
                e.z = 0;
                e.n = code.n;
                if (syndrome(code, e) == 0 && pauli_label_bits(code, e) != 0)
                    return w;
            } else {
                int idx[64];
                int cnt = 0;
                for (int q = 0; q < code.n; ++q)
                    if ((mask >> q) & 1) idx[cnt++] = q;
                std::uint64_t assignments = 1;
                for (int i = 0; i < w; ++i) assignments *= 3;
                for (std::uint64_t a = 0; a < assignments; ++a) {
                    PauliOp e = PauliOp::identity(code.n);
                    std::uint64_t t = a;
                    for (int i = 0; i < w; ++i) {
                        const int letter = int(t % 3);  // 0=X, 1=Z, 2=Y
                        t /= 3;
                        if (letter != 1) e.x |= std::uint64_t(1) << idx[i];
                        if (letter != 0) e.z |= std::uint64_t(1) << idx[i];
                    }
                    if (syndrome(code, e) == 0 && pauli_label_bits(code, e) != 0)
                        return w;
                }
            }
            if (mask == limit - 1 && w == code.n) break;
            const std::uint64_t next = next_same_weight(mask);
            if (next <= mask) break;
            mask = next;
        }
    }
    return w_max + 1;
}

void validate_code(const StabilizerCode& code, bool check_distance) {
    const int n = code.n, k = code.k, m = code.m();
    auto fail = [&](const std::string& what) {
        throw ConfigError("code '" + code.name + "': " + what);
    };
    if (n < 1 || n > kMaxQubits) fail("qubit count out of range");
    if (k < 1 || k > 15) fail("logical qubit count out of range");
    if (m < 1 || m > 63) fail("generator count out of range");
    if (int(code.generators.size()) != m) fail("expected n-k generators");
    if (int(code.destabilizers.size()) != m) fail("expected n-k destabilizers");
    if (int(code.logical_x.size()) != k || int(code.logical_z.size()) != k)
        fail("expected k logical pairs");

    auto check_n = [&](const std::vector<PauliOp>& ops, const char* what) {
        for (const auto& p : ops)
            if (p.n != n) fail(std::string(what) + " has wrong qubit count");
    };
    check_n(code.generators, "generator");
    check_n(code.destabilizers, "destabilizer");
    check_n(code.logical_x, "logical X");
    check_n(code.logical_z, "logical Z");

    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (symplectic(code.generators[a], code.generators[b]))
                fail("generators do not commute");
    for (int i = 0; i < k; ++i) {
        if (code.logical_x[i].is_identity() || code.logical_z[i].is_identity())
            fail("logical operator is identity");
        for (int a = 0; a < m; ++a) {
            if (symplectic(code.logical_x[i], code.generators[a]))
                fail("logical X does not commute with generators");
            if (symplectic(code.logical_z[i], code.generators[a]))
                fail("logical Z does not commute with generators");
        }
        for (int j = 0; j < k; ++j) {
            if (symplectic(code.logical_x[i], code.logical_x[j]))
                fail("logical X pair does not commute");
            if (symplectic(code.logical_z[i], code.logical_z[j]))
                fail("logical Z pair does not commute");
            if (symplectic(code.logical_x[i], code.logical_z[j]) != (i == j ? 1 : 0))
                fail("logical X/Z pairing is not symplectic");
        }
    }
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            if (symplectic(code.destabilizers[a], code.generators[b]) != (a == b ? 1 : 0))
                fail("destabilizer/generator pairing is not symplectic");
            if (b > a && symplectic(code.destabilizers[a], code.destabilizers[b]))
                fail("destabilizers do not commute");
        }
        for (int i = 0; i < k; ++i)
            if (symplectic(code.destabilizers[a], code.logical_x[i]) ||
                symplectic(code.destabilizers[a], code.logical_z[i]))
                fail("destabilizer does not commute with logicals");
    }
    if (check_distance) {
        if (code.d < 1) fail("declared distance out of range");
        const int w = min_logical_weight(code, code.d, code.xonly_distance);
        if (w < code.d) fail("logical representative below declared distance");
        if (w > code.d) fail("no logical representative at declared distance");
    }
}

StabilizerCode make_code(std::string name, int d,
                         std::vector<PauliOp> generators,
                         std::vector<PauliOp> logical_x,
                         std::vector<PauliOp> logical_z,
                         bool xonly_distance, bool check_distance) {
    StabilizerCode code;
    code.name = std::move(name);
    if (generators.empty()) throw ConfigError("code has no generators");
    code.n = generators[0].n;
    code.k = code.n - int(generators.size());
    code.d = d;
    code.generators = std::move(generators);
    code.logical_x = std::move(logical_x);
    code.logical_z = std::move(logical_z);
    code.xonly_distance = xonly_distance;

    code.destabilizers = solve_destabilizers(code.generators, code.n);
    // Symplectic Gram-Schmidt: strip logical components, then make the
    // destabilizers pairwise commuting; neither step touches <D_a, g_b>.
    for (int a = 0; a < code.m(); ++a) {
        PauliOp& v = code.destabilizers[a];
        for (int i = 0; i < code.k; ++i) {
            const int tx = symplectic(v, code.logical_z[i]);
            const int tz = symplectic(v, code.logical_x[i]);
            if (tx) v = prod(v, code.logical_x[i]);
            if (tz) v = prod(v, code.logical_z[i]);
        }
    }
    for (int a = 0; a < code.m(); ++a)
        for (int b = a + 1; b < code.m(); ++b)
            if (symplectic(code.destabilizers[a], code.destabilizers[b]))
                code.destabilizers[b] = prod(code.destabilizers[b], code.generators[a]);

    validate_code(code, check_distance);
    return code;
}

namespace {

StabilizerCode make_repetition(int d) {
    if (d < 2 || d > 16) throw ConfigError("repetition distance out of range");
    std::vector<PauliOp> gens;
    for (int i = 0; i + 1 < d; ++i) {
        PauliOp g = PauliOp::identity(d);
        g.z = std::uint64_t(3) << i;
        gens.push_back(g);
    }
    PauliOp lx = PauliOp::identity(d), lz = PauliOp::identity(d);
    lx.x = (std::uint64_t(1) << d) - 1;
    lz.z = 1;
    return make_code("repetition:" + std::to_string(d), d, gens, {lx}, {lz},
                     /*xonly_distance=*/true);
}

// Rotated surface layout: data qubit (r,c) -> index r*d+c for 0 <= r,c < d.
// Plaquette (r,c), 0 <= r,c <= d, covers the data qubits in rows r-1..r and
// columns c-1..c that fall on the grid; bulk type is Z when r+c is even.
// Top/bottom boundary rows keep only Z plaquettes, left/right columns only X.
StabilizerCode make_rotated_surface(int d) {
    if (d < 2 || d > 5) throw ConfigError("rotated surface distance out of range");
    std::vector<PauliOp> gens;
    for (int r = 0; r <= d; ++r) {
        for (int c = 0; c <= d; ++c) {
            const bool z_type = ((r + c) % 2) == 0;
            const bool bulk = r >= 1 && r <= d - 1 && c >= 1 && c <= d - 1;
            const bool top_bottom = (r == 0 || r == d) && c >= 1 && c <= d - 1;
            const bool left_right = (c == 0 || c == d) && r >= 1 && r <= d - 1;
            if (!(bulk || (top_bottom && z_type) || (left_right && !z_type)))
                continue;
            PauliOp g = PauliOp::identity(d * d);
            for (int dr = r - 1; dr <= r; ++dr)
                for (int dc = c - 1; dc <= c; ++dc) {
                    if (dr < 0 || dr >= d || dc < 0 || dc >= d) continue;
                    const std::uint64_t bit = std::uint64_t(1) << (dr * d + dc);
                    if (z_type)
                        g.z |= bit;
                    else
                        g.x |= bit;
                }
            gens.push_back(g);
        }
    }
    PauliOp lx = PauliOp::identity(d * d), lz = PauliOp::identity(d * d);
    for (int c = 0; c < d; ++c) lx.x |= std::uint64_t(1) << c;          // row 0
    for (int r = 0; r < d; ++r) lz.z |= std::uint64_t(1) << (r * d);   // column 0
    return make_code("rotated_surface:" + std::to_string(d), d, gens, {lx}, {lz});
}

StabilizerCode make_perfect_513() {
    const char* gens[] = {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"};
    std::vector<PauliOp> g;
    for (const char* s : gens) g.push_back(parse_pauli(s));
    return make_code("perfect_513", 3, g, {parse_pauli("XXXXX")},
                     {parse_pauli("ZZZZZ")});
}

StabilizerCode make_steane_713() {
    const char* gens[] = {"IIIXXXX", "IXXIIXX", "XIXIXIX",
                          "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"};
    std::vector<PauliOp> g;
    for (const char* s : gens) g.push_back(parse_pauli(s));
    return make_code("steane_713", 3, g, {parse_pauli("XXXXXXX")},
                     {parse_pauli("ZZZZZZZ")});
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

StabilizerCode parse_code_text(const std::string& text, const std::string& fallback_name) {
    std::istringstream in(text);
    std::string line, section, name = fallback_name;
    int d = 0;
    std::vector<PauliOp> gens, lx, lz;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("code file line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "stabilizers" && section != "logical_x" && section != "logical_z")
                throw ConfigError("code file: unknown section '" + section + "'");
            continue;
        }
        if (section.empty()) {
            std::istringstream ls(line);
            std::string key, value;
            ls >> key >> value;
            if (key == "d")
                d = std::stoi(value);
            else if (key == "name")
                name = value;
            else
                throw ConfigError("code file: unknown header key '" + key + "'");
            continue;
        }
        const PauliOp p = parse_pauli(line);
        if (section == "stabilizers")
            gens.push_back(p);
        else if (section == "logical_x")
            lx.push_back(p);
        else
            lz.push_back(p);
    }
    if (d <= 0) throw ConfigError("code file: missing 'd' header");
    if (gens.empty()) throw ConfigError("code file: no stabilizers");
    return make_code(name, d, gens, lx, lz);
}

StabilizerCode load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open code file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string name = path;
    const auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    if (dot != std::string::npos) name = name.substr(0, dot);
    return parse_code_text(buf.str(), name);
}

StabilizerCode block_product(const StabilizerCode& code, int blocks) {
    if (code.k != 1) throw ConfigError("block product requires a one-logical-qubit code");
    if (blocks < 1 || blocks * code.n > kMaxQubits)
        throw ConfigError("block product size out of range");
    StabilizerCode out;
    out.name = code.name + "x" + std::to_string(blocks);
    out.n = code.n * blocks;
    out.k = blocks;
    out.d = code.d;
    out.xonly_distance = code.xonly_distance;
    for (int b = 0; b < blocks; ++b) {
        const int off = b * code.n;
        for (const auto& g : code.generators)
            out.generators.push_back(embed(g, out.n, off));
        for (const auto& v : code.destabilizers)
            out.destabilizers.push_back(embed(v, out.n, off));
        out.logical_x.push_back(embed(code.logical_x[0], out.n, off));
        out.logical_z.push_back(embed(code.logical_z[0], out.n, off));
    }
    // Generator order groups by block; destabilizer a pairs with generator a.
    validate_code(out, /*check_distance=*/out.n <= 10);
    return out;
}

StabilizerCode promote_logical(const StabilizerCode& code, int i) {
    if (i < 0 || i >= code.k) throw ConfigError("promoted logical index out of range");
    StabilizerCode out;
    out.name = code.name + ":fix" + std::to_string(i);
    out.n = code.n;
    out.k = code.k - 1;
    out.d = code.d;
    out.xonly_distance = code.xonly_distance;
    out.generators = code.generators;
    out.generators.push_back(code.logical_z[i]);
    // Old destabilizers keep <D_a, g_b> and gain commutation with the new
    // generator via multiplication by the promoted logical X.
    for (const auto& v : code.destabilizers) {
        PauliOp w = v;
        if (symplectic(w, code.logical_z[i])) w = prod(w, code.logical_x[i]);
        out.destabilizers.push_back(w);
    }
    out.destabilizers.push_back(code.logical_x[i]);
    for (int j = 0; j < code.k; ++j) {
        if (j == i) continue;
        out.logical_x.push_back(code.logical_x[j]);
        out.logical_z.push_back(code.logical_z[j]);
    }
    validate_code(out, /*check_distance=*/out.n <= 12);
    return out;
}

StabilizerCode catalog(const std::string& name, const std::string& data_dir) {
    const std::string dir = data_dir.empty() ? std::string(QEC_DATA_DIR) : data_dir;
    auto suffix_int = [&](const std::string& prefix) -> int {
        return std::stoi(name.substr(prefix.size()));
    };
    try {
        if (name.rfind("repetition:", 0) == 0) return make_repetition(suffix_int("repetition:"));
        if (name.rfind("rep", 0) == 0 && name.size() > 3 && std::isdigit(name[3]))
            return make_repetition(suffix_int("rep"));
        if (name.rfind("rotated_surface:", 0) == 0)
            return make_rotated_surface(suffix_int("rotated_surface:"));
        if (name.rfind("surface", 0) == 0 && name.size() > 7 && std::isdigit(name[7]))
            return make_rotated_surface(suffix_int("surface"));
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad code name: " + name);
    }
    if (name == "perfect_513" || name == "perfect") return make_perfect_513();
    if (name == "steane_713" || name == "steane") return make_steane_713();
    if (name == "carbon") return load_code(dir + "/codes/carbon.code");
    if (name == "carbon_1214") {
        StabilizerCode c = promote_logical(load_code(dir + "/codes/carbon.code"), 1);
        c.name = "carbon_1214";
        return c;
    }
    throw ConfigError("unknown code name: " + name);
}

}  // namespace qec
