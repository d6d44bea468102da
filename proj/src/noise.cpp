#include "qec/noise.hpp"

#include <cmath>
#include <map>
#include <type_traits>

#include "json.hpp"
#include "qec/dense.hpp"
#include "qec/util.hpp"

namespace qec {

NoiseModel NoiseModel::depolarizing(double eta) {
    if (eta < 0 || eta > 0.75) throw ConfigError("depolarizing eta out of [0, 3/4]");
    NoiseModel nm;
    nm.p[0] = 1 - eta;
    nm.p[1] = nm.p[2] = nm.p[3] = eta / 3;
    nm.lead[0] = nm.lead[1] = nm.lead[2] = 1.0 / 3.0;
    nm.eta = eta;
    nm.name = "depolarizing";
    return nm;
}

NoiseModel NoiseModel::bitflip(double eta) {
    if (eta < 0 || eta > 1) throw ConfigError("bitflip eta out of [0, 1]");
    NoiseModel nm;
    nm.p[0] = 1 - eta;
    nm.p[1] = eta;
    nm.lead[0] = 1.0;
    nm.eta = eta;
    nm.name = "bitflip";
    return nm;
}

std::string NoiseModel::describe() const {
    return name + ":" + format_double(eta);
}

EtaSeries EtaSeries::monomial(int order, double coeff) {
    EtaSeries s;
    if (coeff == 0.0) return s;
    s.is_zero = false;
    s.order = order;
    s.c[0] = coeff;
    return s;
}

double EtaSeries::eval(double eta) const {
    if (is_zero) return 0.0;
    double out = 0.0, pw = std::pow(eta, order);
    for (int j = 0; j < kTerms; ++j, pw *= eta) out += c[j] * pw;
    return out;
}

double EtaSeries::coeff(int ord) const {
    if (is_zero || ord < order || ord >= order + kTerms) return 0.0;
    return c[ord - order];
}

namespace {

// Shifts so that c[0] is nonzero; coefficients pushed past the window are
// unknown and zero-filled (they are O() terms of the shifted series).
EtaSeries normalized(EtaSeries s) {
    if (s.is_zero) return s;
    int shift = 0;
    while (shift < EtaSeries::kTerms && s.c[shift] == 0.0) ++shift;
    if (shift == EtaSeries::kTerms) return EtaSeries::zero();
    if (shift > 0) {
        for (int j = 0; j + shift < EtaSeries::kTerms; ++j) s.c[j] = s.c[j + shift];
        for (int j = EtaSeries::kTerms - shift; j < EtaSeries::kTerms; ++j) s.c[j] = 0.0;
        s.order += shift;
    }
    return s;
}

}  // namespace

EtaSeries add(const EtaSeries& a, const EtaSeries& b) {
    if (a.is_zero) return b;
    if (b.is_zero) return a;
    EtaSeries out;
    out.is_zero = false;
    out.order = std::min(a.order, b.order);
    for (int j = 0; j < EtaSeries::kTerms; ++j)
        out.c[j] = a.coeff(out.order + j) + b.coeff(out.order + j);
    return normalized(out);
}

EtaSeries mul(const EtaSeries& a, const EtaSeries& b) {
    if (a.is_zero || b.is_zero) return EtaSeries::zero();
    EtaSeries out;
    out.is_zero = false;
    out.order = a.order + b.order;
    for (int j = 0; j < EtaSeries::kTerms; ++j)
        for (int l = 0; j + l < EtaSeries::kTerms; ++l) out.c[j + l] += a.c[j] * b.c[l];
    return normalized(out);
}

EtaSeries scale(const EtaSeries& a, double x) {
    if (a.is_zero || x == 0.0) return EtaSeries::zero();
    EtaSeries out = a;
    for (auto& v : out.c) v *= x;
    return out;
}

int series_compare(const EtaSeries& a, const EtaSeries& b) {
    const EtaSeries diff = add(a, scale(b, -1.0));
    if (diff.is_zero) return 0;
    return diff.c[0] > 0 ? 1 : -1;
}

namespace {

void fill_meta(const StabilizerCode& code, const NoiseModel& noise, int m,
               bool zonly, SyndromeTable* t, SeriesTable* st) {
    if (t) {
        t->code_name = code.name;
        t->noise_name = noise.describe();
        t->n = code.n;
        t->k = zonly ? 1 : code.k;
        t->m = m;
        t->d = code.d;
        t->eta = noise.eta;
        t->zonly = zonly;
    }
    if (st) {
        st->code_name = code.name;
        st->noise_name = noise.describe();
        st->n = code.n;
        st->k = zonly ? 1 : code.k;
        st->m = m;
        st->d = code.d;
        st->eta = noise.eta;
        st->zonly = zonly;
    }
}

double add_mass(double a, double b) { return a + b; }
EtaSeries add_mass(const EtaSeries& a, const EtaSeries& b) { return add(a, b); }

template <class MassT>
void build_entries(const std::map<std::uint64_t, std::vector<MassT>>& acc,
                   int nclasses, BasicSyndromeTable<MassT>& table) {
    for (const auto& [s, masses] : acc) {
        typename BasicSyndromeTable<MassT>::Entry e;
        e.s = s;
        bool any = false;
        for (int c = 0; c < nclasses; ++c) {
            if constexpr (std::is_same_v<MassT, double>) {
                if (masses[c] == 0.0) continue;
            } else {
                if (masses[c].is_zero) continue;
            }
            e.classes.emplace_back(ClassLabel(c), masses[c]);
            e.total = add_mass(e.total, masses[c]);
            any = true;
        }
        if (any) table.entries.push_back(std::move(e));
    }
}

struct ErrorContext {
    std::vector<PauliOp> gens;
    std::vector<ClassLabel> destab_label;
    const StabilizerCode* code;

    explicit ErrorContext(const StabilizerCode& c) : gens(c.generators), code(&c) {
        for (const auto& v : c.destabilizers)
            destab_label.push_back(pauli_label_bits(c, v));
    }

    std::uint64_t synd(const PauliOp& e) const {
        std::uint64_t s = 0;
        for (std::size_t a = 0; a < gens.size(); ++a)
            s |= std::uint64_t(symplectic(e, gens[a])) << a;
        return s;
    }

    ClassLabel cls(const PauliOp& e, std::uint64_t s) const {
        ClassLabel c = pauli_label_bits(*code, e);
        for (std::size_t a = 0; a < destab_label.size(); ++a)
            if ((s >> a) & 1) c ^= destab_label[a];
        return c;
    }
};

// Walks every Pauli of weight w in [1, w_max] in a fixed order.
template <class Fn>
void for_each_bounded_error(int n, int w_max, const Fn& fn) {
    for (int w = 1; w <= std::min(w_max, n); ++w) {
        std::uint64_t mask = (std::uint64_t(1) << w) - 1;
        const std::uint64_t limit = std::uint64_t(1) << n;
        while (mask < limit) {
            int idx[64];
            int cnt = 0;
            for (int q = 0; q < n; ++q)
                if ((mask >> q) & 1) idx[cnt++] = q;
            std::uint64_t assignments = 1;
            for (int i = 0; i < w; ++i) assignments *= 3;
            for (std::uint64_t a = 0; a < assignments; ++a) {
                PauliOp e = PauliOp::identity(n);
                int letters[64];
                std::uint64_t t = a;
                for (int i = 0; i < w; ++i) {
                    const int letter = int(t % 3);  // 0=X, 1=Z, 2=Y
                    t /= 3;
                    letters[i] = letter;
                    if (letter != 1) e.x |= std::uint64_t(1) << idx[i];
                    if (letter != 0) e.z |= std::uint64_t(1) << idx[i];
                }
                fn(e, w, letters);
            }
            std::uint64_t tmask = mask | (mask - 1);
            const std::uint64_t next =
                (tmask + 1) | (((~tmask & (tmask + 1)) - 1) >> (__builtin_ctzll(mask) + 1));
            if (next <= mask || next >= limit) break;
            mask = next;
        }
    }
}

}  // namespace

SyndromeTable enumerate_exact(const StabilizerCode& code, const NoiseModel& noise,
                              int threads) {
    if (code.n > 12)
        throw ConfigError("exact enumeration limited to n <= 12; use the truncated back-end");
    if (2 * code.k > 16) throw ConfigError("too many logical qubits for a class table");
    const int n = code.n, k = code.k, m = code.m();
    const int nclasses = 1 << (2 * k);
    const std::size_t nsyn = std::size_t(1) << m;

    std::array<std::vector<double>, 4> powp;
    for (int c = 0; c < 4; ++c) {
        powp[c].assign(n + 1, 1.0);
        for (int w = 1; w <= n; ++w) powp[c][w] = powp[c][w - 1] * noise.p[c];
    }

    const ErrorContext ctx(code);
    const std::uint64_t total = std::uint64_t(1) << (2 * n);
    const std::uint64_t xmask = (std::uint64_t(1) << n) - 1;

    std::vector<std::vector<double>> shard_acc(kNumShards);
    run_sharded(kNumShards, threads, [&](std::size_t shard) {
        const std::uint64_t lo = shard_begin(total, kNumShards, shard);
        const std::uint64_t hi = shard_begin(total, kNumShards, shard + 1);
        if (lo == hi) return;
        auto& acc = shard_acc[shard];
        acc.assign(nsyn * nclasses, 0.0);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            const std::uint64_t x = idx & xmask, z = idx >> n;
            const int ny = popcount64(x & z);
            const int nx = popcount64(x) - ny;
            const int nz = popcount64(z) - ny;
            const double pr =
                powp[0][n - nx - ny - nz] * powp[1][nx] * powp[2][ny] * powp[3][nz];
            if (pr == 0.0) continue;
            PauliOp e;
            e.x = x;
            e.z = z;
            e.n = n;
            const std::uint64_t s = ctx.synd(e);
            acc[s * nclasses + ctx.cls(e, s)] += pr;
        }
    });

    std::vector<double> merged(nsyn * nclasses, 0.0);
    for (std::size_t shard = 0; shard < kNumShards; ++shard) {
        const auto& acc = shard_acc[shard];
        if (acc.empty()) continue;
        for (std::size_t i = 0; i < merged.size(); ++i) merged[i] += acc[i];
    }

    SyndromeTable table;
    fill_meta(code, noise, m, false, &table, nullptr);
    for (std::size_t s = 0; s < nsyn; ++s) {
        SyndromeTable::Entry e;
        e.s = s;
        for (int c = 0; c < nclasses; ++c) {
            const double v = merged[s * nclasses + c];
            if (v == 0.0) continue;
            e.classes.emplace_back(ClassLabel(c), v);
            e.total += v;
        }
        if (!e.classes.empty()) table.entries.push_back(std::move(e));
    }
    return table;
}

SyndromeTable enumerate_truncated(const StabilizerCode& code, const NoiseModel& noise,
                                  int w_cut) {
    if (w_cut < 0 || w_cut > code.n) throw ConfigError("w_cut out of [0, n]");
    if (2 * code.k > 16) throw ConfigError("too many logical qubits for a class table");
    const int n = code.n, k = code.k;
    const int nclasses = 1 << (2 * k);

    std::array<std::vector<double>, 4> powp;
    for (int c = 0; c < 4; ++c) {
        powp[c].assign(n + 1, 1.0);
        for (int w = 1; w <= n; ++w) powp[c][w] = powp[c][w - 1] * noise.p[c];
    }

    const ErrorContext ctx(code);
    std::map<std::uint64_t, std::vector<double>> acc;
    double included = powp[0][n];
    acc[0].assign(nclasses, 0.0);
    acc[0][0] = powp[0][n];  // identity error

    for_each_bounded_error(n, w_cut, [&](const PauliOp& e, int w, const int* letters) {
        int cnt[3] = {0, 0, 0};
        for (int i = 0; i < w; ++i) ++cnt[letters[i]];
        const double pr =
            powp[0][n - w] * powp[1][cnt[0]] * powp[3][cnt[1]] * powp[2][cnt[2]];
        if (pr == 0.0) return;
        const std::uint64_t s = ctx.synd(e);
        auto it = acc.find(s);
        if (it == acc.end()) it = acc.emplace(s, std::vector<double>(nclasses, 0.0)).first;
        it->second[ctx.cls(e, s)] += pr;
        included += pr;
    });

    SyndromeTable table;
    fill_meta(code, noise, code.m(), false, &table, nullptr);
    table.w_cut = w_cut;
    table.excluded_mass = 1.0 - included;
    build_entries(acc, nclasses, table);
    return table;
}

SeriesTable enumerate_leading(const StabilizerCode& code, const NoiseModel& noise,
                              int w_max) {
    if (w_max < 0 || w_max > code.n) throw ConfigError("w_max out of [0, n]");
    if (2 * code.k > 16) throw ConfigError("too many logical qubits for a class table");
    const int k = code.k;
    const int nclasses = 1 << (2 * k);
    // letter order 0=X, 1=Z, 2=Y; lead[] order X, Y, Z
    const double letter_lead[3] = {noise.lead[0], noise.lead[2], noise.lead[1]};

    const ErrorContext ctx(code);
    std::map<std::uint64_t, std::vector<EtaSeries>> acc;
    acc[0].assign(nclasses, EtaSeries::zero());
    acc[0][0] = EtaSeries::monomial(0, 1.0);

    for_each_bounded_error(code.n, w_max, [&](const PauliOp& e, int w, const int* letters) {
        double coeff = 1.0;
        for (int i = 0; i < w; ++i) coeff *= letter_lead[letters[i]];
        if (coeff == 0.0) return;
        const std::uint64_t s = ctx.synd(e);
        auto it = acc.find(s);
        if (it == acc.end())
            it = acc.emplace(s, std::vector<EtaSeries>(nclasses, EtaSeries::zero())).first;
        auto& slot = it->second[ctx.cls(e, s)];
        slot = add(slot, EtaSeries::monomial(w, coeff));
    });

    SeriesTable table;
    fill_meta(code, noise, code.m(), false, nullptr, &table);
    table.w_cut = w_max;
    build_entries(acc, nclasses, table);
    return table;
}

namespace {

struct ZOnlyContext {
    std::vector<PauliOp> zgens;
    PauliOp lz;
    int n;

    explicit ZOnlyContext(const StabilizerCode& code) : n(code.n) {
        if (code.k != 1) throw ConfigError("Z-only decoding requires k = 1");
        for (const auto& g : code.generators) {
            const bool xtype = g.z == 0 && g.x != 0;
            const bool ztype = g.x == 0 && g.z != 0;
            if (!xtype && !ztype)
                throw ConfigError("Z-only decoding requires a CSS code");
            if (ztype) zgens.push_back(g);
        }
        if (zgens.empty()) throw ConfigError("code has no Z-type generators");
        if (code.logical_z[0].x != 0 || code.logical_x[0].z != 0)
            throw ConfigError("Z-only decoding requires X/Z-type logical representatives");
        lz = code.logical_z[0];
    }

    std::uint64_t synd(std::uint64_t x) const {
        std::uint64_t s = 0;
        for (std::size_t a = 0; a < zgens.size(); ++a)
            s |= std::uint64_t(parity64(x & zgens[a].z)) << a;
        return s;
    }

    ClassLabel cls(std::uint64_t x) const {
        return parity64(x & lz.z) ? ClassLabel(1) : ClassLabel(0);
    }
};

}  // namespace

SyndromeTable enumerate_exact_zonly(const StabilizerCode& code, const NoiseModel& noise) {
    if (code.n > 25) throw ConfigError("Z-only exact enumeration limited to n <= 25");
    const ZOnlyContext ctx(code);
    const int n = code.n;
    const double q = noise.p[1] + noise.p[2];
    std::vector<double> pow_q(n + 1, 1.0), pow_i(n + 1, 1.0);
    for (int w = 1; w <= n; ++w) {
        pow_q[w] = pow_q[w - 1] * q;
        pow_i[w] = pow_i[w - 1] * (1.0 - q);
    }

    std::map<std::uint64_t, std::vector<double>> acc;
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
        const int w = popcount64(x);
        const double pr = pow_q[w] * pow_i[n - w];
        if (pr == 0.0) continue;
        const std::uint64_t s = ctx.synd(x);
        auto it = acc.find(s);
        if (it == acc.end()) it = acc.emplace(s, std::vector<double>(4, 0.0)).first;
        it->second[ctx.cls(x)] += pr;
    }

    SyndromeTable table;
    fill_meta(code, noise, int(ctx.zgens.size()), true, &table, nullptr);
    build_entries(acc, 4, table);
    return table;
}

SeriesTable enumerate_leading_zonly(const StabilizerCode& code, const NoiseModel& noise,
                                    int w_max) {
    const ZOnlyContext ctx(code);
    const int n = code.n;
    const double flip_lead = noise.lead[0] + noise.lead[1];

    std::map<std::uint64_t, std::vector<EtaSeries>> acc;
    acc[0].assign(4, EtaSeries::zero());
    acc[0][0] = EtaSeries::monomial(0, 1.0);
    for (int w = 1; w <= std::min(w_max, n); ++w) {
        double coeff = 1.0;
        for (int i = 0; i < w; ++i) coeff *= flip_lead;
        if (coeff == 0.0) continue;
        std::uint64_t mask = (std::uint64_t(1) << w) - 1;
        const std::uint64_t limit = std::uint64_t(1) << n;
        while (mask < limit) {
            const std::uint64_t s = ctx.synd(mask);
            auto it = acc.find(s);
            if (it == acc.end())
                it = acc.emplace(s, std::vector<EtaSeries>(4, EtaSeries::zero())).first;
            auto& slot = it->second[ctx.cls(mask)];
            slot = add(slot, EtaSeries::monomial(w, coeff));
            std::uint64_t t = mask | (mask - 1);
            const std::uint64_t next =
                (t + 1) | (((~t & (t + 1)) - 1) >> (__builtin_ctzll(mask) + 1));
            if (next <= mask || next >= limit) break;
            mask = next;
        }
    }

    SeriesTable table;
    fill_meta(code, noise, int(ctx.zgens.size()), true, nullptr, &table);
    table.w_cut = w_max;
    build_entries(acc, 4, table);
    return table;
}

SyndromeTable evaluate_series_table(const SeriesTable& table, double eta) {
    SyndromeTable out;
    out.code_name = table.code_name;
    out.noise_name = table.noise_name;
    out.n = table.n;
    out.k = table.k;
    out.m = table.m;
    out.d = table.d;
    out.eta = eta;
    out.zonly = table.zonly;
    out.w_cut = table.w_cut;
    for (const auto& e : table.entries) {
        SyndromeTable::Entry oe;
        oe.s = e.s;
        for (const auto& [c, mass] : e.classes) {
            const double v = mass.eval(eta);
            if (v == 0.0) continue;
            oe.classes.emplace_back(c, v);
            oe.total += v;
        }
        if (!oe.classes.empty()) out.entries.push_back(std::move(oe));
    }
    return out;
}

std::string table_to_json(const SyndromeTable& table) {
    nlohmann::json j;
    j["code"] = table.code_name;
    j["noise"] = table.noise_name;
    j["n"] = table.n;
    j["k"] = table.k;
    j["m"] = table.m;
    j["d"] = table.d;
    j["eta"] = table.eta;
    j["zonly"] = table.zonly;
    j["w_cut"] = table.w_cut;
    j["excluded_mass"] = table.excluded_mass;
    auto& entries = j["entries"] = nlohmann::json::array();
    for (const auto& e : table.entries) {
        nlohmann::json je;
        je["s"] = e.s;
        je["p"] = e.total;
        auto& classes = je["classes"] = nlohmann::json::array();
        for (const auto& [c, mass] : e.classes)
            classes.push_back({std::uint32_t(c), mass});
        entries.push_back(std::move(je));
    }
    return j.dump(1);
}

SyndromeTable table_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        SyndromeTable table;
        table.code_name = j.at("code").get<std::string>();
        table.noise_name = j.at("noise").get<std::string>();
        table.n = j.at("n").get<int>();
        table.k = j.at("k").get<int>();
        table.m = j.at("m").get<int>();
        table.d = j.at("d").get<int>();
        table.eta = j.at("eta").get<double>();
        table.zonly = j.at("zonly").get<bool>();
        table.w_cut = j.at("w_cut").get<int>();
        table.excluded_mass = j.at("excluded_mass").get<double>();
        for (const auto& je : j.at("entries")) {
            SyndromeTable::Entry e;
            e.s = je.at("s").get<std::uint64_t>();
            e.total = je.at("p").get<double>();
            for (const auto& jc : je.at("classes"))
                e.classes.emplace_back(ClassLabel(jc.at(0).get<std::uint32_t>()),
                                       jc.at(1).get<double>());
            table.entries.push_back(std::move(e));
        }
        return table;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("bad table JSON: ") + ex.what());
    }
}

SectorOracleReport syndrome_sector_oracle(const StabilizerCode& code,
                                          const NoiseModel& noise,
                                          std::uint64_t seed) {
    if (code.n > 7) throw ConfigError("sector oracle limited to n <= 7");
    const int k = code.k, m = code.m();
    const int labels = (1 << (2 * k)) - 1;
    const SyndromeTable table = enumerate_exact(code, noise, 1);
    const Vec v = random_pure_bloch(k, seed, 0);
    const CMat rho = encoded_state(code, v);
    const CMat after = apply_noise_channel(rho, noise, code.n);

    std::vector<CMat> rep(labels + 1);
    for (int j = 1; j <= labels; ++j) rep[j] = logical_rep_matrix(code, ClassLabel(j));

    SectorOracleReport report;
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << m); ++s) {
        const CMat proj = syndrome_projector(code, s);
        const CMat sector = mul(proj, mul(after, proj));
        const double w = trace(sector).real();
        const auto* entry = table.find(s);
        const double p_s = entry ? entry->total : 0.0;
        report.max_weight_diff = std::max(report.max_weight_diff, std::abs(w - p_s));
        ++report.sectors;
        if (p_s < 1e-14) continue;
        const CMat rec = pauli_matrix(canonical_recovery(code, s));
        const CMat corrected = mul(rec, mul(sector, rec));
        for (int j = 1; j <= labels; ++j) {
            const double u = trace(mul(corrected, rep[j])).real() / p_s;
            double lam = 0.0;
            for (const auto& [c, mass] : entry->classes)
                lam += (label_anticommutes(c, ClassLabel(j), k) ? -mass : mass);
            lam /= p_s;
            report.max_contraction_diff =
                std::max(report.max_contraction_diff, std::abs(u - lam * v[j - 1]));
        }
    }
    return report;
}

}  // namespace qec
