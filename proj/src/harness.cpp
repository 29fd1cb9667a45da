#include "ptc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "ptc/assign.hpp"

namespace ptc {

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        if (!kv.emplace(key, value).second)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    return kv;
}

std::vector<double> parse_snr_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        double a = 0, b = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::stringstream ss(text);
        if (!(ss >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0))
            throw ConfigError("bad SNR range '" + text + "', expected a:b:step");
        for (double v = a; v <= b + 1e-9; v += step) grid.push_back(v);
    } else {
        std::stringstream ss(text);
        double v;
        while (ss >> v) grid.push_back(v);
        if (!ss.eof()) throw ConfigError("bad SNR list '" + text + "'");
    }
    if (grid.empty()) throw ConfigError("empty SNR grid");
    return grid;
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("bad boolean '" + v + "' for " + key);
}

}  // namespace

ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv, const std::string& config_dir) {
    static const std::vector<std::string> known = {
        "k",         "n",        "K",           "generators",  "codebook",     "channel",   "A",
        "gamma",     "t_noise",  "nbi_row",     "nbi_slots",   "nbi_power_db", "scheme",    "schemes",
        "g_max",     "input_mode", "tie_mode",  "ebno_db",     "block_bits",   "max_bits",  "target_errors",
        "seed",      "workers",  "es",          "tau_scale",   "wall_time",    "out"};
    for (const auto& [key, value] : kv)
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config key '" + key + "'");

    auto get = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError("missing config key '" + key + "'");
        return it->second;
    };
    auto get_or = [&](const std::string& key, const std::string& fallback) {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };

    ExperimentConfig cfg;
    cfg.code = ConvCodeSpec::parse(std::stoi(get("k")), std::stoi(get("n")), std::stoi(get("K")), get("generators"));
    cfg.codebook_ref = get("codebook");

    const std::string channel = get_or("channel", "awgn");
    if (channel == "awgn") {
        cfg.channel = ChannelKind::Awgn;
    } else if (channel == "plc") {
        cfg.channel = ChannelKind::Plc;
    } else {
        throw ConfigError("channel must be awgn or plc");
    }
    cfg.impulsive_index = std::stod(get_or("A", "1"));
    cfg.gamma = std::stod(get_or("gamma", "0"));
    cfg.t_noise = std::stod(get_or("t_noise", "0"));
    const int nbi_row = std::stoi(get_or("nbi_row", "0"));
    if (nbi_row > 0)
        cfg.nbi = NbiParams{nbi_row, std::stoi(get_or("nbi_slots", "0")), std::stod(get_or("nbi_power_db", "0"))};

    // `scheme` and `schemes` are interchangeable; both take a list.
    if (kv.count("scheme") && kv.count("schemes")) throw ConfigError("give either 'scheme' or 'schemes', not both");
    std::stringstream schemes(kv.count("scheme") ? get("scheme") : get("schemes"));
    std::string name;
    while (schemes >> name) cfg.schemes.push_back(scheme_from_string(name));
    if (cfg.schemes.empty()) throw ConfigError("no schemes listed");

    cfg.g_max = std::stoi(get_or("g_max", "1"));
    const std::string mode = get_or("input_mode", "auto");
    if (mode == "auto") {
        cfg.input_mode = InputModeConfig::Auto;
    } else if (mode == "soft") {
        cfg.input_mode = InputModeConfig::Soft;
    } else if (mode == "threshold") {
        cfg.input_mode = InputModeConfig::Threshold;
    } else {
        throw ConfigError("input_mode must be auto, soft or threshold");
    }
    const std::string tie = get_or("tie_mode", "deterministic");
    if (tie == "deterministic") {
        cfg.tie_mode = TieMode::Deterministic;
    } else if (tie == "random") {
        cfg.tie_mode = TieMode::Random;
    } else {
        throw ConfigError("tie_mode must be deterministic or random");
    }

    cfg.ebno_grid_db = parse_snr_grid(get("ebno_db"));
    cfg.block_bits = std::stoi(get_or("block_bits", "120"));
    cfg.max_bits = std::stoll(get_or("max_bits", "10000000"));
    cfg.target_errors = std::stoll(get_or("target_errors", "100"));
    cfg.seed = std::stoull(get_or("seed", "1"));
    cfg.workers = std::stoi(get_or("workers", "1"));
    cfg.es = std::stod(get_or("es", "1"));
    cfg.tau_scale = std::stod(get_or("tau_scale", "0.6"));
    cfg.record_wall_time = parse_bool(get_or("wall_time", "on"), "wall_time");
    cfg.out_path = get_or("out", "");

    // Resolve a file-relative codebook path against the config's directory so
    // the returned config stands on its own.
    if (cfg.codebook_ref.rfind("file:", 0) == 0 && !config_dir.empty()) {
        const std::string path = cfg.codebook_ref.substr(5);
        if (!path.empty() && path[0] != '/') cfg.codebook_ref = "file:" + config_dir + path;
    }
    // Probe early so config errors carry the file context.
    cfg.load_codebook();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::string dir;
    const auto slash = path.find_last_of('/');
    if (slash != std::string::npos) dir = path.substr(0, slash + 1);
    return config_from_kv(parse_kv_file(path), dir);
}

Codebook ExperimentConfig::load_codebook(const std::string& config_dir) const {
    if (codebook_ref == "m3_table1") return Codebook::table1_m3();
    if (codebook_ref == "m4_table1") return Codebook::table1_m4();
    if (codebook_ref.rfind("file:", 0) == 0) {
        std::string path = codebook_ref.substr(5);
        if (!path.empty() && path[0] != '/' && !config_dir.empty()) path = config_dir + path;
        return Codebook::load(path);
    }
    throw ConfigError("unknown codebook '" + codebook_ref + "' (use m3_table1, m4_table1 or file:<path>)");
}

InputMode ExperimentConfig::resolve_input_mode() const {
    switch (input_mode) {
        case InputModeConfig::Soft: return InputMode::Soft;
        case InputModeConfig::Threshold: return InputMode::Threshold;
        case InputModeConfig::Auto: break;
    }
    return channel == ChannelKind::Plc ? InputMode::Threshold : InputMode::Soft;
}

void ExperimentConfig::validate(const Codebook& book) const {
    code.validate();
    if (code.n != book.n())
        throw ConfigError("code n=" + std::to_string(code.n) + " does not match codebook n=" +
                          std::to_string(book.n()));
    for (const SchemeId id : schemes) validate_scheme({id, g_max, resolve_input_mode()}, book);
    for (size_t i = 1; i < ebno_grid_db.size(); ++i)
        if (!(ebno_grid_db[i] > ebno_grid_db[i - 1])) throw ConfigError("SNR grid must be strictly increasing");
    if (block_bits < code.k || block_bits % code.k != 0)
        throw ConfigError("block_bits must be a positive multiple of k");
    if (max_bits < block_bits) throw ConfigError("max_bits is smaller than one block");
    if (target_errors < 0) throw ConfigError("target_errors must be >= 0");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (!(es > 0.0)) throw ConfigError("es must be positive");
    if (!(tau_scale > 0.0)) throw ConfigError("tau_scale must be positive");
    ChannelParams probe{ebno_grid_db.empty() ? 0.0 : ebno_grid_db[0], impulsive_index, gamma, t_noise, nbi};
    probe.validate();
}

// ---------------------------------------------------------------------------
// Monte Carlo runner
// ---------------------------------------------------------------------------

double BerRecord::sigma() const {
    if (bits == 0) return 0.0;
    return std::sqrt(std::max<double>(bit_errors, 1.0)) / static_cast<double>(bits);
}

namespace {

struct TrialResult {
    long long errors = 0;
    DecodeCounters counters;
};

struct PointContext {
    const ExperimentConfig* cfg;
    const Codebook* book;
    const Trellis* trellis;
    SchemeConfig scheme;
    double esn0_db;
    std::uint64_t point_index;
};

TrialResult run_trial(const PointContext& ctx, long long trial) {
    const ExperimentConfig& cfg = *ctx.cfg;
    RngStream root(cfg.seed, (ctx.point_index << 42) | static_cast<std::uint64_t>(trial));
    RngStream msg_rng = root.fork(1);
    RngStream chan_rng = root.fork(2);
    RngStream tie_rng = root.fork(3);

    Bits message(cfg.block_bits);
    for (auto& bit : message) bit = static_cast<std::uint8_t>(msg_rng.next_u64() >> 63);

    const Bits coded = encode(*ctx.trellis, append_flush(*ctx.trellis, message));
    const int n = cfg.code.n;
    const size_t stages = coded.size() / n;

    ChannelParams params{ctx.esn0_db, cfg.impulsive_index, cfg.gamma, cfg.t_noise, cfg.nbi};
    std::vector<ReceivedMatrix> received;
    received.reserve(stages);
    for (size_t v = 0; v < stages; ++v) {
        unsigned label = 0;
        for (int j = 0; j < n; ++j) label = (label << 1) | coded[v * n + j];
        const CodeMatrix s = modulate(ctx.book->codeword(label), cfg.es);
        received.push_back(cfg.channel == ChannelKind::Plc ? transmit_plc(s, params, chan_rng)
                                                           : transmit_awgn(s, params, chan_rng));
    }

    TrialResult result;
    const double tau = cfg.tau_scale * std::sqrt(cfg.es);
    RngStream* jitter = cfg.tie_mode == TieMode::Random ? &tie_rng : nullptr;
    const Bits decoded = decode_block(ctx.scheme, received, tau, *ctx.book, *ctx.trellis, &result.counters, jitter);

    for (size_t i = 0; i < message.size(); ++i) result.errors += message[i] != decoded[i];
    return result;
}

BerRecord run_point(const PointContext& ctx) {
    const ExperimentConfig& cfg = *ctx.cfg;
    BerRecord record;
    record.scheme = ctx.scheme.id;

    const auto start = std::chrono::steady_clock::now();
    // Fixed batch size keeps the stopping decision independent of the worker
    // count: a batch always completes before the rule is consulted.
    constexpr long long kBatch = 64;
    long long next_trial = 0;
    const long long max_blocks = cfg.max_bits / cfg.block_bits;
    DecodeCounters totals;

    while (record.blocks < max_blocks &&
           (cfg.target_errors == 0 || record.bit_errors < cfg.target_errors)) {
        const long long batch = std::min(kBatch, max_blocks - record.blocks);
        std::vector<TrialResult> results(batch);
        if (cfg.workers == 1) {
            for (long long t = 0; t < batch; ++t) results[t] = run_trial(ctx, next_trial + t);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(cfg.workers);
            for (int w = 0; w < cfg.workers; ++w) {
                pool.emplace_back([&, w]() {
                    for (long long t = w; t < batch; t += cfg.workers) results[t] = run_trial(ctx, next_trial + t);
                });
            }
            for (auto& th : pool) th.join();
        }
        for (const TrialResult& r : results) {
            record.bit_errors += r.errors;
            totals += r.counters;
        }
        record.blocks += batch;
        next_trial += batch;
    }

    record.bits = record.blocks * cfg.block_bits;
    record.ber = record.bits > 0 ? static_cast<double>(record.bit_errors) / static_cast<double>(record.bits) : 0.0;
    record.solver_ops = totals.solver_ops;
    record.demap_ops = totals.demap_ops;
    record.viterbi_ops = totals.viterbi_ops;
    record.demod_ops = totals.demod_ops;
    if (cfg.record_wall_time)
        record.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

}  // namespace

std::vector<BerRecord> run_sweep(const ExperimentConfig& config) {
    const Codebook book = config.load_codebook();
    config.validate(book);
    const Trellis trellis(config.code);
    const InputMode input = config.resolve_input_mode();

    std::vector<BerRecord> records;
    std::uint64_t point_index = 0;
    for (const SchemeId scheme : config.schemes) {
        for (const double ebno_db : config.ebno_grid_db) {
            PointContext ctx{&config, &book, &trellis,
                             SchemeConfig{scheme, config.g_max, input},
                             ebno_to_esno(ebno_db, config.rate_p(book), book.M()), point_index++};
            BerRecord record = run_point(ctx);
            record.ebno_db = ebno_db;
            records.push_back(record);
        }
    }
    return records;
}

// ---------------------------------------------------------------------------
// CSV and counters
// ---------------------------------------------------------------------------

void write_csv(const std::vector<BerRecord>& records, std::ostream& out) {
    out << kCsvHeader << "\n";
    char line[256];
    for (const BerRecord& r : records) {
        std::snprintf(line, sizeof line, "%s,%.6g,%lld,%lld,%.6e,%llu,%llu,%llu,%.3f",
                      to_string(r.scheme).c_str(), r.ebno_db, r.bits, r.bit_errors, r.ber,
                      static_cast<unsigned long long>(r.solver_ops), static_cast<unsigned long long>(r.demap_ops),
                      static_cast<unsigned long long>(r.viterbi_ops), r.wall_s);
        out << line << "\n";
    }
}

std::string to_csv(const std::vector<BerRecord>& records) {
    std::ostringstream out;
    write_csv(records, out);
    return out.str();
}

std::vector<CounterSummary> counters_report(const std::vector<BerRecord>& records) {
    std::map<SchemeId, std::pair<DecodeCounters, long long>> by_scheme;
    for (const BerRecord& r : records) {
        auto& [sum, blocks] = by_scheme[r.scheme];
        sum.solver_ops += r.solver_ops;
        sum.demap_ops += r.demap_ops;
        sum.viterbi_ops += r.viterbi_ops;
        sum.demod_ops += r.demod_ops;
        blocks += r.blocks;
    }
    std::vector<CounterSummary> report;
    for (const auto& [scheme, entry] : by_scheme) {
        const auto& [sum, blocks] = entry;
        if (blocks == 0) continue;
        const double inv = 1.0 / static_cast<double>(blocks);
        report.push_back({scheme, sum.solver_ops * inv, sum.demap_ops * inv, sum.viterbi_ops * inv,
                          sum.demod_ops * inv});
    }
    return report;
}

double fit_growth_exponent(const std::vector<std::pair<int, double>>& ops_by_m) {
    if (ops_by_m.size() < 2) throw InputError("need at least two points to fit a growth exponent");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [m, ops] : ops_by_m) {
        const double x = std::log(static_cast<double>(m));
        const double y = std::log(ops);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double count = static_cast<double>(ops_by_m.size());
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Solver self-test
// ---------------------------------------------------------------------------

namespace {

CostMatrix random_matrix(int m, RngStream& rng, double lo = -1.0, double hi = 1.0) {
    CostMatrix c{Square<double>(m)};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) c.cells(i, j) = rng.uniform(lo, hi);
    return c;
}

bool report(std::ostream& out, const std::string& name, bool ok, const std::string& detail = "") {
    out << (ok ? "PASS" : "FAIL") << "  " << name;
    if (!detail.empty()) out << "  (" << detail << ")";
    out << "\n";
    return ok;
}

}  // namespace

bool solvers_selftest(std::ostream& out) {
    bool all = true;
    RngStream rng(20240901, 0);

    {
        int mismatches = 0;
        for (int m = 3; m <= 6; ++m) {
            for (int i = 0; i < 200; ++i) {
                const CostMatrix c = random_matrix(m, rng);
                if (std::abs(hungarian(c).cost - brute_force_best(c).cost) > 1e-9) ++mismatches;
            }
        }
        all &= report(out, "hungarian == exhaustive minimum (800 matrices, M=3..6)", mismatches == 0,
                      std::to_string(mismatches) + " mismatches");
    }
    {
        int bad = 0;
        for (int i = 0; i < 50; ++i) {
            const CostMatrix c = random_matrix(4, rng);
            std::vector<double> costs;
            std::vector<int> perm{0, 1, 2, 3};
            do {
                double total = 0;
                for (int r = 0; r < 4; ++r) total += c.cells(r, perm[r]);
                costs.push_back(total);
            } while (std::next_permutation(perm.begin(), perm.end()));
            std::sort(costs.begin(), costs.end());
            const auto ranked = murty_kbest(c, 10);
            for (int g = 0; g < 10; ++g)
                if (std::abs(ranked[g].cost - costs[g]) > 1e-9) ++bad;
        }
        all &= report(out, "murty 10-best matches sorted enumeration (50 matrices, M=4)", bad == 0);
    }
    {
        int invalid = 0, below = 0, diag_mismatch = 0;
        for (int m = 4; m <= 8; ++m) {
            for (int i = 0; i < 40; ++i) {
                const CostMatrix c = random_matrix(m, rng);
                const Assignment bb = branch_and_bound(c);
                if (!is_permutation_1m(assignment_codeword(bb))) ++invalid;
                if (bb.cost < hungarian(c).cost - 1e-9) ++below;
            }
            for (int i = 0; i < 20; ++i) {
                CostMatrix c = random_matrix(m, rng, 0.0, 1.0);
                for (int d = 0; d < m; ++d) c.cells(d, d) = -1.0 - rng.uniform();
                if (std::abs(branch_and_bound(c).cost - hungarian(c).cost) > 1e-9) ++diag_mismatch;
            }
        }
        all &= report(out, "branch-and-bound validity and optimality bound (M=4..8)",
                      invalid == 0 && below == 0 && diag_mismatch == 0);
    }
    {
        auto mean_ops = [&](int m) {
            std::uint64_t total = 0;
            for (int i = 0; i < 40; ++i) {
                const CostMatrix c = random_matrix(m, rng);
                std::uint64_t ops = 0;
                hungarian(c, &ops);
                total += ops;
            }
            return static_cast<double>(total) / 40.0;
        };
        const double ratio = mean_ops(16) / mean_ops(8);
        all &= report(out, "hungarian ops grow ~cubically (M=8 -> 16 ratio in [4, 12])", ratio >= 4.0 && ratio <= 12.0,
                      "ratio " + std::to_string(ratio));
    }
    {
        std::vector<std::pair<int, double>> bb_points, murty_points;
        for (int m : {4, 8, 16, 32}) {
            std::uint64_t bb_total = 0, murty_total = 0;
            for (int i = 0; i < 20; ++i) {
                const CostMatrix c = random_matrix(m, rng);
                std::uint64_t ops = 0;
                branch_and_bound(c, &ops);
                bb_total += ops;
                ops = 0;
                murty_kbest(c, 2, &ops);
                murty_total += ops;
            }
            bb_points.push_back({m, bb_total / 20.0});
            murty_points.push_back({m, murty_total / 20.0});
        }
        const double bb_exp = fit_growth_exponent(bb_points);
        const double murty_exp = fit_growth_exponent(murty_points);
        all &= report(out, "branch-and-bound growth <= M^3 log M", bb_exp < 3.6, "exponent " + std::to_string(bb_exp));
        all &= report(out, "murty per-rank growth <= M^4", murty_exp < 4.5, "exponent " + std::to_string(murty_exp));
    }
    return all;
}

}  // namespace ptc
