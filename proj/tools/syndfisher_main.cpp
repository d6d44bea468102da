// syndfisher: computes syndrome-conditioned logical channels for stabilizer
// codes under i.i.d. Pauli noise and the classical/quantum Fisher-information
// quantities built on them. Subcommands cover the exact/limit ratio sweeps,
// Haar-averaged identities, estimator simulations, and the surface-code
// complementary-gap experiment. Output is CSV (or a JSON mirror) with a
// config header line; a given config and seed reproduce files byte for byte.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qec/channels.hpp"
#include "qec/codes.hpp"
#include "qec/fisher.hpp"
#include "qec/haar.hpp"
#include "qec/noise.hpp"
#include "qec/protocols.hpp"
#include "qec/qfisher.hpp"
#include "qec/surface_mc.hpp"
#include "qec/util.hpp"

#ifndef QEC_DATA_DIR
#define QEC_DATA_DIR ""
#endif

namespace {

using namespace qec;

struct CommonOpts {
    std::string out;
    std::string format = "csv";
    std::string data_dir = QEC_DATA_DIR;
    int threads = 0;
    std::uint64_t seed = 1;
};

// ---------------------------------------------------------------------------
// Grids and labels.

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    const auto range = text.find("..");
    if (range != std::string::npos) {
        int points = 20;
        std::string rest = text.substr(range + 2);
        const auto colon = rest.find(':');
        if (colon != std::string::npos) {
            points = std::stoi(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const double lo = std::stod(text.substr(0, range));
        const double hi = std::stod(rest);
        if (lo <= 0 || hi <= 0 || points < 1)
            throw ConfigError("grid bounds must be positive: " + text);
        if (points == 1) return {lo};
        for (int i = 0; i < points; ++i)
            out.push_back(std::exp(std::log(lo) +
                                   (std::log(hi) - std::log(lo)) * i / (points - 1)));
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    if (out.empty()) throw ConfigError("empty grid: " + text);
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    const auto range = text.find("..");
    if (range != std::string::npos) {
        const int lo = std::stoi(text.substr(0, range));
        const int hi = std::stoi(text.substr(range + 2));
        if (hi < lo) throw ConfigError("descending range: " + text);
        for (int v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    if (out.empty()) throw ConfigError("empty list: " + text);
    return out;
}

// "" -> Z on logical qubit 1; else "Z1", "X2", "Y1", compounds like "X1Z2",
// or a raw packed label integer.
ClassLabel parse_label(const std::string& text, int k) {
    if (text.empty()) return make_label(0, 1, k);
    bool digits = true;
    for (char c : text)
        if (!std::isdigit(static_cast<unsigned char>(c))) digits = false;
    std::uint32_t x = 0, z = 0;
    if (digits) {
        const unsigned long v = std::stoul(text);
        x = static_cast<std::uint32_t>(v) & ((1u << k) - 1u);
        z = static_cast<std::uint32_t>(v) >> k;
    } else {
        std::size_t i = 0;
        while (i < text.size()) {
            const char axis = text[i++];
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            if (j == i) throw ConfigError("bad label syntax: " + text);
            const int qubit = std::stoi(text.substr(i, j - i));
            if (qubit < 1 || qubit > k)
                throw ConfigError("label qubit out of range: " + text);
            const std::uint32_t bit = 1u << (qubit - 1);
            if (axis == 'X' || axis == 'x')
                x ^= bit;
            else if (axis == 'Z' || axis == 'z')
                z ^= bit;
            else if (axis == 'Y' || axis == 'y')
                x ^= bit, z ^= bit;
            else
                throw ConfigError("bad label axis: " + text);
            i = j;
        }
    }
    const ClassLabel label = make_label(x, z, k);
    if (label == 0 || label >= (1u << (2 * k)))
        throw ConfigError("label out of range: " + text);
    return label;
}

NoiseModel make_noise(const std::string& name, double eta) {
    if (name == "depolarizing") return NoiseModel::depolarizing(eta);
    if (name == "bitflip") return NoiseModel::bitflip(eta);
    throw ConfigError("unknown noise model: " + name);
}

// Rewrites each `--config FILE` (or `--config=FILE`) into the file's
// `key = value` lines as --key=value tokens at the same position, so the
// values land in the scope (subcommand) where --config appeared. Later
// command-line options still override config values.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    auto trim = [](const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    std::vector<std::string> out;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        std::string file;
        if (a == "--config") {
            if (i + 1 >= argc) throw ConfigError("--config requires a file path");
            file = argv[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            file = a.substr(9);
        } else {
            out.push_back(a);
            continue;
        }
        std::ifstream in(file);
        if (!in) throw ConfigError("cannot open config file: " + file);
        std::string line;
        while (std::getline(in, line)) {
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (trim(line).empty()) continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line is not key = value: " + line);
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("config line has an empty key: " + line);
            out.push_back(value.empty() ? "--" + key : "--" + key + "=" + value);
        }
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

// ---------------------------------------------------------------------------
// Output document: CSV body plus a structured JSON mirror.

struct Doc {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::string columns;
    std::vector<std::string> lines;                // rows and comments, in order
    std::vector<std::vector<std::string>> rows;    // structured rows
    std::vector<std::string> summaries;            // comment lines

    void cfg(const std::string& key, const std::string& value) {
        config.emplace_back(key, value);
    }
    void row(const std::vector<std::string>& cells) {
        rows.push_back(cells);
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        lines.push_back(line);
    }
    void comment(const std::string& text) {
        summaries.push_back(text);
        lines.push_back(text);
    }

    std::string header() const {
        std::string h = "# syndfisher " + command;
        for (const auto& kv : config) h += " " + kv.first + "=" + kv.second;
        return h;
    }

    std::string render_csv() const {
        std::string out = header() + "\n" + columns + "\n";
        for (const auto& line : lines) out += line + "\n";
        return out;
    }

    std::string render_json() const {
        nlohmann::json j;
        j["command"] = command;
        nlohmann::json cfg_obj = nlohmann::json::object();
        for (const auto& kv : config) cfg_obj[kv.first] = kv.second;
        j["config"] = cfg_obj;
        std::vector<std::string> cols;
        std::stringstream ss(columns);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
        j["columns"] = cols;
        j["rows"] = rows;
        j["summaries"] = summaries;
        return j.dump(2) + "\n";
    }
};

void write_doc(const CommonOpts& common, const Doc& doc) {
    const std::string text =
        common.format == "json" ? doc.render_json() : doc.render_csv();
    if (common.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(common.out, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + common.out);
    f << text;
}

std::string bool_str(bool b) { return b ? "1" : "0"; }

// ---------------------------------------------------------------------------
// classical-ratio

struct ClassicalOpts {
    std::string codes = "steane";
    std::string noise = "depolarizing";
    std::string eta = "1e-4..1e-1";
    double theta = 0.0;
    std::string target;
    bool zonly = false;
    int w_cut = -1;
};

void cmd_classical_ratio(const CommonOpts& common, const ClassicalOpts& opt) {
    const std::vector<std::string> names = split_list(opt.codes);
    const std::vector<double> etas = parse_grid(opt.eta);
    if (opt.theta < 0 || opt.theta >= 1)
        throw ConfigError("theta must lie in [0, 1)");

    Doc doc;
    doc.command = "classical-ratio";
    doc.cfg("code", opt.codes);
    doc.cfg("noise", opt.noise);
    doc.cfg("eta", opt.eta);
    doc.cfg("theta", format_double(opt.theta));
    doc.cfg("target", opt.target.empty() ? "Z1" : opt.target);
    doc.cfg("zonly", bool_str(opt.zonly));
    doc.cfg("w_cut", std::to_string(opt.w_cut));
    doc.cfg("seed", std::to_string(common.seed));
    doc.columns = ratio_csv_header();

    for (const auto& name : names) {
        const StabilizerCode code = catalog(name, common.data_dir);
        const int table_k = opt.zonly ? 1 : code.k;
        const ClassLabel target = parse_label(opt.target, table_k);

        const NoiseModel lead_noise = make_noise(opt.noise, 1e-3);
        const int w_max = (code.d + 1) / 2;
        SeriesTable lead = opt.zonly
                               ? enumerate_leading_zonly(code, lead_noise, w_max)
                               : enumerate_leading(code, lead_noise, w_max);
        lead = ml_normalize(lead, target);
        const SyndromeClassification cls = classify_syndromes(lead, target, code.d);
        const double limit = limit_ratio_classical(cls, target, opt.theta);

        for (double eta : etas) {
            const NoiseModel nm = make_noise(opt.noise, eta);
            SyndromeTable table;
            if (opt.zonly)
                table = enumerate_exact_zonly(code, nm);
            else if (opt.w_cut >= 0)
                table = enumerate_truncated(code, nm, opt.w_cut);
            else
                table = enumerate_exact(code, nm, common.threads);
            table = ml_normalize(table, target);
            const double eps_i = average_error_rate(table, target);
            if (eps_i <= 0)
                throw InfeasibleError("no error mass for " + code.name +
                                      " at eta=" + format_double(eta));
            const CsyndResult cs = eps_csynd(table, target, opt.theta);
            RatioRow row;
            row.eta = eta;
            row.theta = opt.theta;
            row.eps = eps_i;
            row.eps_csynd = cs.eps;
            row.ratio = cs.eps / eps_i;
            row.lower = (1.0 - opt.theta * opt.theta) / 2.0;
            row.upper = 1.0;
            row.limit = limit;
            doc.row({code.name, format_double(row.eta), format_double(row.theta),
                     format_double(row.eps), format_double(row.eps_csynd),
                     format_double(row.ratio), format_double(row.lower),
                     format_double(row.upper), format_double(row.limit)});
        }
    }
    write_doc(common, doc);
}

// ---------------------------------------------------------------------------
// quantum-ratio (Haar-averaged low-error-limit ratio over block products)

struct QuantumRatioOpts {
    std::string blocks = "surface2";
    std::string k = "1..3";
    std::string noise = "depolarizing";
    int n = 1000;
};

void cmd_quantum_ratio(const CommonOpts& common, const QuantumRatioOpts& opt) {
    const std::vector<std::string> bases = split_list(opt.blocks);
    const std::vector<int> ks = parse_int_list(opt.k);
    if (opt.n < 2) throw ConfigError("need at least 2 samples");

    Doc doc;
    doc.command = "quantum-ratio";
    doc.cfg("blocks", opt.blocks);
    doc.cfg("k", opt.k);
    doc.cfg("noise", opt.noise);
    doc.cfg("n", std::to_string(opt.n));
    doc.cfg("seed", std::to_string(common.seed));
    doc.columns = "code,noise,k,mean,se,n,qualifies";

    const std::vector<Fig6Row> rows =
        fig6_sweep(bases, ks, opt.noise, opt.n, common.seed, common.data_dir,
                   common.threads);
    for (const auto& r : rows)
        doc.row({r.code, opt.noise, std::to_string(r.k), format_double(r.mean),
                 format_double(r.se), std::to_string(r.n), bool_str(r.qualifies)});
    write_doc(common, doc);
}

// ---------------------------------------------------------------------------
// haar (identity checks and the single-channel sweep)

struct HaarOpts {
    std::string check = "lemma1";
    std::string k = "1..3";
    int n = 1000;
    std::string q;
    std::string target;
    std::string code = "rep2";
    std::string noise = "bitflip";
    double ex = 0.01, ey = 0.0, ez = 0.0;
};

void cmd_haar(const CommonOpts& common, const HaarOpts& opt) {
    const std::vector<int> ks = parse_int_list(opt.k);
    if (opt.n < 2) throw ConfigError("need at least 2 samples");

    Doc doc;
    doc.command = "haar";
    doc.cfg("check", opt.check);
    doc.cfg("k", opt.k);
    doc.cfg("n", std::to_string(opt.n));
    if (opt.check == "thm2") {
        doc.cfg("code", opt.code);
        doc.cfg("noise", opt.noise);
    }
    if (opt.check == "fig5") {
        doc.cfg("ex", format_double(opt.ex));
        doc.cfg("ey", format_double(opt.ey));
        doc.cfg("ez", format_double(opt.ez));
    }
    doc.cfg("seed", std::to_string(common.seed));

    if (opt.check == "fig5") {
        doc.columns = "k,ex,ey,ez,mean,se,n,seed";
        const std::vector<Fig5Row> rows =
            fig5_sweep(ks, opt.ex, opt.ey, opt.ez, opt.n, common.seed, common.threads);
        for (const auto& r : rows)
            doc.row({std::to_string(r.k), format_double(r.ex), format_double(r.ey),
                     format_double(r.ez), format_double(r.mean), format_double(r.se),
                     std::to_string(r.n), std::to_string(common.seed)});
        write_doc(common, doc);
        return;
    }

    doc.columns = haar_csv_header();
    for (int k : ks) {
        if (k < 1 || k > 5) throw ConfigError("k out of range");
        const ClassLabel q = opt.q.empty() ? make_label(1, 0, k) : parse_label(opt.q, k);
        const ClassLabel target = parse_label(opt.target, k);
        if (opt.check == "moment") {
            const AveragedQuantity avg =
                haar_mean(k, opt.n, common.seed, common.threads,
                          [](int, const BlochState& st) {
                              return st.theta[0] * st.theta[0];
                          });
            doc.row({"theta_sq", std::to_string(k),
                     format_double(1.0 / ((1 << k) + 1)), format_double(avg.mean),
                     format_double(avg.se), std::to_string(avg.n),
                     std::to_string(common.seed)});
        } else if (opt.check == "lemma1") {
            const AveragedQuantity avg =
                lemma1_average(k, q, target, opt.n, common.seed, common.threads);
            doc.row({"lemma1_delta", std::to_string(k),
                     format_double(std::pow(2.0, -(k + 2))), format_double(avg.mean),
                     format_double(avg.se), std::to_string(avg.n),
                     std::to_string(common.seed)});
        } else if (opt.check == "prop3") {
            const Prop3Result res =
                prop3_average(k, q, opt.n, common.seed, common.threads);
            for (std::size_t j = 0; j < res.j_minus.size(); ++j) {
                AveragedQuantity avg;
                avg.mean = res.mean(j, j);
                avg.se = res.se(j, j);
                avg.n = res.n;
                doc.row({"prop3_diag", std::to_string(k),
                         "j" + std::to_string(res.j_minus[j] + 1),
                         format_double(avg.mean), format_double(avg.se),
                         std::to_string(avg.n), std::to_string(common.seed)});
            }
        } else if (opt.check == "thm2") {
            const std::vector<Fig6Row> rows =
                fig6_sweep({opt.code}, {k}, opt.noise, opt.n, common.seed,
                           common.data_dir, common.threads);
            for (const auto& r : rows) {
                if (!r.qualifies)
                    throw InfeasibleError("code " + r.code +
                                          " does not satisfy the balanced-coset "
                                          "assumptions at k=" +
                                          std::to_string(r.k));
                AveragedQuantity avg;
                avg.mean = r.mean;
                avg.se = r.se;
                avg.n = r.n;
                doc.row({"thm2_ratio", std::to_string(r.k),
                         format_double(std::pow(2.0, -(r.k + 1))),
                         format_double(avg.mean), format_double(avg.se),
                         std::to_string(avg.n), std::to_string(common.seed)});
            }
        } else {
            throw ConfigError("unknown check: " + opt.check);
        }
    }
    write_doc(common, doc);
}

// ---------------------------------------------------------------------------
// protocol-sim

struct ProtocolOpts {
    std::string protocol = "agnostic";
    std::string code = "rep2";
    std::string noise = "bitflip";
    double eta = 0.1;
    double theta = 0.3;
    std::string target;
    double n = 1e5;
    int replicas = 200;
    bool shuffle = false;
    std::string init = "oracle";
    int k = 1;
    double p = 0.2;
    std::string q;
};

void cmd_protocol_sim(const CommonOpts& common, const ProtocolOpts& opt) {
    const std::int64_t n = static_cast<std::int64_t>(std::llround(opt.n));
    if (n < 4) throw ConfigError("need at least 4 copies");
    if (opt.replicas < 2) throw ConfigError("need at least 2 replicas");

    Doc doc;
    doc.command = "protocol-sim";
    doc.cfg("protocol", opt.protocol);
    if (opt.protocol == "quantum") {
        doc.cfg("k", std::to_string(opt.k));
        doc.cfg("p", format_double(opt.p));
        doc.cfg("q", opt.q.empty() ? "X1" : opt.q);
        doc.cfg("init", opt.init);
    } else {
        doc.cfg("code", opt.code);
        doc.cfg("noise", opt.noise);
        doc.cfg("eta", format_double(opt.eta));
        doc.cfg("theta", format_double(opt.theta));
        if (opt.protocol == "csynd") doc.cfg("shuffle", bool_str(opt.shuffle));
    }
    doc.cfg("target", opt.target.empty() ? "Z1" : opt.target);
    doc.cfg("n", std::to_string(n));
    doc.cfg("replicas", std::to_string(opt.replicas));
    doc.cfg("seed", std::to_string(common.seed));
    doc.columns = protocol_csv_header();

    if (opt.protocol == "agnostic" || opt.protocol == "csynd") {
        const StabilizerCode code = catalog(opt.code, common.data_dir);
        const ClassLabel target = parse_label(opt.target, code.k);
        const NoiseModel nm = make_noise(opt.noise, opt.eta);
        SyndromeTable table = enumerate_exact(code, nm, common.threads);
        table = ml_normalize(table, target);
        EstimatorResult r;
        std::string name = opt.protocol;
        if (opt.protocol == "agnostic") {
            r = run_agnostic_experiment(table, target, opt.theta, n, opt.replicas,
                                        common.seed, common.threads);
        } else {
            r = run_csynd_experiment(table, target, opt.theta, n, opt.replicas,
                                     common.seed, opt.shuffle, common.threads);
            if (opt.shuffle) name += "-shuffled";
        }
        doc.row({name, code.name + ":" + nm.name, format_double(opt.eta),
                 format_double(opt.theta), std::to_string(n),
                 format_double(r.bias), format_double(r.variance),
                 format_double(r.crb), format_double(r.ratio),
                 std::to_string(common.seed)});
    } else if (opt.protocol == "quantum") {
        if (opt.k < 1 || opt.k > 3) throw ConfigError("quantum protocol needs k in 1..3");
        if (opt.p < 0 || opt.p >= 1) throw ConfigError("p must lie in [0, 1)");
        const ClassLabel q = opt.q.empty() ? make_label(1, 0, opt.k)
                                           : parse_label(opt.q, opt.k);
        const ClassLabel target = parse_label(opt.target, opt.k);
        Rng state_rng(common.seed, 0xFFFFu);
        const BlochState psi = sample_haar(opt.k, state_rng);
        const InitMode mode =
            opt.init == "rough" ? InitMode::kRough : InitMode::kOracle;
        if (opt.init != "rough" && opt.init != "oracle")
            throw ConfigError("init must be oracle or rough");
        const EstimatorResult r = run_quantum_experiment(
            psi, opt.p, q, target, n, opt.replicas, mode, common.seed, common.threads);
        const double theta_true = psi.theta[target - 1];
        doc.row({"quantum-" + opt.init, "haar:k" + std::to_string(opt.k),
                 format_double(opt.p), format_double(theta_true), std::to_string(n),
                 format_double(r.bias), format_double(r.variance),
                 format_double(r.crb), format_double(r.ratio),
                 std::to_string(common.seed)});
    } else {
        throw ConfigError("unknown protocol: " + opt.protocol);
    }
    write_doc(common, doc);
}

// ---------------------------------------------------------------------------
// surface-gap

struct SurfaceOpts {
    std::string d = "2";
    std::string eta = "0.01";
    double shots = 1e6;
    double theta = 0.0;
    int cap = 12;
    double min_group = 50;
};

void cmd_surface_gap(const CommonOpts& common, const SurfaceOpts& opt) {
    const std::vector<int> ds = parse_int_list(opt.d);
    const std::vector<double> etas = parse_grid(opt.eta);
    const std::int64_t shots = static_cast<std::int64_t>(std::llround(opt.shots));
    const std::int64_t min_group =
        static_cast<std::int64_t>(std::llround(opt.min_group));

    Doc doc;
    doc.command = "surface-gap";
    doc.cfg("d", opt.d);
    doc.cfg("eta", opt.eta);
    doc.cfg("shots", std::to_string(shots));
    doc.cfg("theta", format_double(opt.theta));
    doc.cfg("cap", std::to_string(opt.cap));
    doc.cfg("min_group", std::to_string(min_group));
    doc.cfg("seed", std::to_string(common.seed));
    doc.columns = gap_csv_header();

    for (int d : ds) {
        for (double eta : etas) {
            const GapExperimentResult res =
                run_gap_experiment(d, eta, shots, common.seed, opt.theta,
                                   common.threads, opt.cap, min_group);
            for (const auto& grp : res.groups) doc.row(
                {std::to_string(res.d), format_double(res.eta),
                 std::to_string(grp.gap), format_double(grp.p_hat),
                 format_double(grp.eps_hat), format_double(grp.se)});
            doc.comment(gap_csv_summary(res));
        }
    }
    write_doc(common, doc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "syndrome-conditioned logical channels and Fisher-information bounds "
        "for stabilizer codes"};
    app.require_subcommand(1);
    // Later occurrences win, so command-line flags override --config values.
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string config_stub;
    CommonOpts common;
    ClassicalOpts classical;
    QuantumRatioOpts quantum;
    HaarOpts haar;
    ProtocolOpts protocol;
    SurfaceOpts surface;

    auto add_common = [&](CLI::App* sub) {
        // Help-only stub: expand_config_args consumes --config before parsing.
        sub->add_option("--config", config_stub, "Read options from key = value lines");
        sub->add_option("--out", common.out, "Output file (default: stdout)");
        sub->add_option("--format", common.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", common.threads,
                        "Worker threads (0 = hardware); never changes output")
            ->envname("SYNDFISHER_THREADS");
        sub->add_option("--seed", common.seed, "PRNG seed");
        sub->add_option("--data-dir", common.data_dir,
                        "Directory holding codes/<name>.code files");
    };

    CLI::App* c1 = app.add_subcommand(
        "classical-ratio", "eps_csynd/eps_i sweep over eta with the eta->0 limit");
    c1->add_option("--code", classical.codes, "Catalog code name(s), comma separated");
    c1->add_option("--noise", classical.noise, "depolarizing or bitflip");
    c1->add_option("--eta", classical.eta, "Grid: lo..hi[:points] (log) or list");
    c1->add_option("--theta", classical.theta, "Target expectation value");
    c1->add_option("--target", classical.target, "Target label (default Z1)");
    c1->add_flag("--z-only", classical.zonly,
                 "Bit-flip marginal decoded from Z-type generators");
    c1->add_option("--w-cut", classical.w_cut,
                   "Truncate enumeration at this error weight (-1 = exact)");
    add_common(c1);

    CLI::App* c2 = app.add_subcommand(
        "quantum-ratio", "Haar-mean low-error-limit ratio for block-product codes");
    c2->add_option("--blocks", quantum.blocks, "Base catalog code name(s)");
    c2->add_option("--k", quantum.k, "Block counts, e.g. 1..3");
    c2->add_option("--noise", quantum.noise, "depolarizing or bitflip");
    c2->add_option("--n", quantum.n, "Haar samples");
    add_common(c2);

    CLI::App* c3 = app.add_subcommand("haar", "Haar-averaged identity checks");
    c3->add_option("--check", haar.check, "moment, lemma1, prop3, thm2, or fig5");
    c3->add_option("--k", haar.k, "Logical qubit counts, e.g. 1..4");
    c3->add_option("--n", haar.n, "Haar samples");
    c3->add_option("--q", haar.q, "Coset label (default X1)");
    c3->add_option("--target", haar.target, "Target label (default Z1)");
    c3->add_option("--code", haar.code, "Base code for thm2");
    c3->add_option("--noise", haar.noise, "Noise model for thm2");
    c3->add_option("--ex", haar.ex, "fig5: X flip rate");
    c3->add_option("--ey", haar.ey, "fig5: Y flip rate");
    c3->add_option("--ez", haar.ez, "fig5: Z flip rate");
    add_common(c3);

    CLI::App* c4 = app.add_subcommand("protocol-sim",
                                      "Monte Carlo estimator-variance experiments");
    c4->add_option("--protocol", protocol.protocol, "agnostic, csynd, or quantum");
    c4->add_option("--code", protocol.code, "Catalog code (classical protocols)");
    c4->add_option("--noise", protocol.noise, "depolarizing or bitflip");
    c4->add_option("--eta", protocol.eta, "Physical error rate");
    c4->add_option("--theta", protocol.theta, "True target expectation");
    c4->add_option("--target", protocol.target, "Target label (default Z1)");
    c4->add_option("--n", protocol.n, "Copies per replica");
    c4->add_option("--replicas", protocol.replicas, "Independent replicas");
    c4->add_flag("--shuffle", protocol.shuffle,
                 "csynd control: permute syndrome labels before estimating");
    c4->add_option("--init", protocol.init, "quantum stage 1: oracle or rough");
    c4->add_option("--k", protocol.k, "quantum: logical qubits (Haar state)");
    c4->add_option("--p", protocol.p, "quantum: mixing weight of the flipped branch");
    c4->add_option("--q", protocol.q, "quantum: coset label (default X1)");
    add_common(c4);

    CLI::App* c5 = app.add_subcommand(
        "surface-gap", "Rotated-surface-code complementary-gap experiment");
    c5->add_option("--d", surface.d, "Distances, e.g. 2..5");
    c5->add_option("--eta", surface.eta, "Depolarizing strengths");
    c5->add_option("--shots", surface.shots, "Monte Carlo shots per (d, eta)");
    c5->add_option("--theta", surface.theta, "Target expectation value");
    c5->add_option("--cap", surface.cap, "Defect-count cap (overflow above)");
    c5->add_option("--min-group", surface.min_group,
                   "Merge gap groups smaller than this");
    add_common(c5);

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c1->parsed()) cmd_classical_ratio(common, classical);
        if (c2->parsed()) cmd_quantum_ratio(common, quantum);
        if (c3->parsed()) cmd_haar(common, haar);
        if (c4->parsed()) cmd_protocol_sim(common, protocol);
        if (c5->parsed()) cmd_surface_gap(common, surface);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
