#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ptc/channel.hpp"
#include "ptc/convcode.hpp"
#include "ptc/permmap.hpp"
#include "ptc/schemes.hpp"

namespace ptc {

enum class ChannelKind { Awgn, Plc };
enum class TieMode { Deterministic, Random };
enum class InputModeConfig { Auto, Soft, Threshold };

/// One SNR sweep over a set of schemes: code, book, channel, grid, stopping
/// rule and seeding. Built from a flat key = value config file.
struct ExperimentConfig {
    ConvCodeSpec code;
    std::string codebook_ref = "m3_table1";  // m3_table1 | m4_table1 | file:<path>
    ChannelKind channel = ChannelKind::Awgn;
    double impulsive_index = 1.0;
    double gamma = 0.0;
    double t_noise = 0.0;
    std::optional<NbiParams> nbi;

    std::vector<SchemeId> schemes;
    int g_max = 1;
    InputModeConfig input_mode = InputModeConfig::Auto;
    TieMode tie_mode = TieMode::Deterministic;

    std::vector<double> ebno_grid_db;
    int block_bits = 120;
    long long max_bits = 10'000'000;
    long long target_errors = 100;
    std::uint64_t seed = 1;
    int workers = 1;
    double es = 1.0;
    double tau_scale = kThresholdScale;
    bool record_wall_time = true;

    std::string out_path;

    void validate(const Codebook& book) const;  // throws ConfigError
    Codebook load_codebook(const std::string& config_dir = "") const;
    InputMode resolve_input_mode() const;
    double rate_p(const Codebook& book) const { return static_cast<double>(code.k) / book.M(); }
};

/// Flat "key = value" file, '#' comments. Unknown keys are rejected.
std::map<std::string, std::string> parse_kv_file(const std::string& path);
ExperimentConfig config_from_kv(const std::map<std::string, std::string>& kv, const std::string& config_dir = "");
ExperimentConfig load_config(const std::string& path);

/// "a:b:step" (inclusive of b up to rounding) or a space-separated list.
std::vector<double> parse_snr_grid(const std::string& text);

struct BerRecord {
    SchemeId scheme = SchemeId::S1;
    double ebno_db = 0.0;
    long long bits = 0;
    long long bit_errors = 0;
    double ber = 0.0;
    long long blocks = 0;
    std::uint64_t solver_ops = 0;
    std::uint64_t demap_ops = 0;
    std::uint64_t viterbi_ops = 0;
    std::uint64_t demod_ops = 0;
    double wall_s = 0.0;

    /// Standard error of the BER estimate.
    double sigma() const;
};

/// Runs every (scheme, SNR) point in grid order. Per point, trials run in
/// fixed-size batches until >= target_errors bit errors or the bit budget is
/// spent; each trial draws from RngStream(seed, point/trial) so results do
/// not depend on worker count or scheduling.
std::vector<BerRecord> run_sweep(const ExperimentConfig& config);

inline constexpr const char* kCsvHeader = "scheme,ebno_db,bits,bit_errors,ber,solver_ops,demap_ops,viterbi_ops,wall_s";
void write_csv(const std::vector<BerRecord>& records, std::ostream& out);
std::string to_csv(const std::vector<BerRecord>& records);

/// Per-scheme mean elementary operation counts per decoded block.
struct CounterSummary {
    SchemeId scheme;
    double solver_per_block = 0.0;
    double demap_per_block = 0.0;
    double viterbi_per_block = 0.0;
    double demod_per_block = 0.0;
};
std::vector<CounterSummary> counters_report(const std::vector<BerRecord>& records);

/// Least-squares slope of log(ops) against log(M).
double fit_growth_exponent(const std::vector<std::pair<int, double>>& ops_by_m);

/// Oracle property suite over random matrices (solver equivalences, ranking
/// prefixes, BB validity, growth ratios). Prints one line per check to `out`;
/// returns true when everything passed.
bool solvers_selftest(std::ostream& out);

}  // namespace ptc
