#include "ptc/schemes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace ptc {

std::string to_string(SchemeId id) {
    switch (id) {
        case SchemeId::HdEd: return "hd-ed";
        case SchemeId::HdTd: return "hd-td";
        case SchemeId::S1: return "s1";
        case SchemeId::S2: return "s2";
        case SchemeId::S3: return "s3";
        case SchemeId::S4: return "s4";
        case SchemeId::Od1: return "od1";
        case SchemeId::Od2: return "od2";
    }
    return "?";
}

SchemeId scheme_from_string(const std::string& name) {
    for (SchemeId id : {SchemeId::HdEd, SchemeId::HdTd, SchemeId::S1, SchemeId::S2, SchemeId::S3, SchemeId::S4,
                        SchemeId::Od1, SchemeId::Od2})
        if (to_string(id) == name) return id;
    throw ConfigError("unknown scheme '" + name + "'");
}

void validate_scheme(const SchemeConfig& cfg, const Codebook& book) {
    if (cfg.g_max < 1) throw ConfigError("g_max must be >= 1");
    if (cfg.g_max > book.size())
        throw ConfigError("g_max " + std::to_string(cfg.g_max) + " exceeds the 2^n = " + std::to_string(book.size()) +
                          " cap");
}

CostMatrix build_cost_matrix(const ReceivedMatrix& y) {
    const int m = y.M();
    CostMatrix c{Square<double>(m)};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) c.cells(i, j) = -std::abs(y.cells(i, j));
    return c;
}

CostMatrix build_cost_matrix(const DemodMatrix& r) {
    const int m = r.M();
    CostMatrix c{Square<double>(m)};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) c.cells(i, j) = -static_cast<double>(r.cells(i, j));
    return c;
}

PsddResult psdd_decode(const CostMatrix& c, const Codebook& book, int g_max, std::uint64_t* solver_ops) {
    MurtyRanker ranker(c, solver_ops);
    PsddResult result;
    for (int g = 1; g <= g_max; ++g) {
        auto a = ranker.next();
        if (!a) break;  // M! exhausted; keep the last codeword examined
        result.codeword = assignment_codeword(*a);
        result.iterations = g;
        if (book.find_codeword(result.codeword)) {
            result.in_book = true;
            return result;
        }
    }
    result.in_book = false;
    return result;
}

namespace {

/// Non-binary branch metric table: Hamming distance between the decided
/// sequence and each branch's mapped codeword.
std::vector<double> codeword_stage_metrics(const Codeword& decided, const Codebook& book) {
    std::vector<double> metrics(book.size());
    for (int label = 0; label < book.size(); ++label)
        metrics[label] = hamming_distance(book.codeword(label), decided);
    return metrics;
}

/// Binary branch metric table: Hamming distance between the demapped tuple
/// and each n-bit branch label.
std::vector<double> tuple_stage_metrics(unsigned tuple, int num_labels) {
    std::vector<double> metrics(num_labels);
    for (int label = 0; label < num_labels; ++label)
        metrics[label] = std::popcount(tuple ^ static_cast<unsigned>(label));
    return metrics;
}

Bits finish_block(const Trellis& trellis, const StageMetrics& metrics, DecodeCounters* counters) {
    std::uint64_t viterbi_ops = 0;
    Bits all_bits = viterbi_decode(trellis, metrics, 0, &viterbi_ops);
    if (counters) counters->viterbi_ops += viterbi_ops;
    const size_t message_bits = all_bits.size() - static_cast<size_t>(trellis.flush_steps()) * trellis.spec().k;
    all_bits.resize(message_bits);
    return all_bits;
}

void check_block_shape(size_t stages, const Trellis& trellis) {
    if (static_cast<int>(stages) < trellis.flush_steps() + 1)
        throw InputError("block needs at least " + std::to_string(trellis.flush_steps() + 1) + " stages");
}

enum class TerminalMetric { RawCodeword, Demapped };

Bits decode_psdd_block(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                       int g_max, TerminalMetric terminal, DecodeCounters* counters) {
    check_block_shape(blocks.size(), trellis);
    StageMetrics metrics(blocks.size());
    for (size_t v = 0; v < blocks.size(); ++v) {
        std::uint64_t solver_ops = 0;
        const PsddResult stage = psdd_decode(blocks[v], book, g_max, &solver_ops);
        if (counters) counters->solver_ops += solver_ops;
        if (terminal == TerminalMetric::RawCodeword) {
            metrics[v] = codeword_stage_metrics(stage.codeword, book);
        } else {
            std::uint64_t demap_ops = 0;
            const int row = stage.in_book ? *book.find_codeword(stage.codeword)
                                          : book.demap_min_distance_row(stage.codeword, &demap_ops);
            if (counters) counters->demap_ops += demap_ops;
            metrics[v] = tuple_stage_metrics(Codebook::tuple_index(book.row(row).tuple), trellis.num_labels());
        }
    }
    return finish_block(trellis, metrics, counters);
}

Bits decode_bb_block(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                     TerminalMetric terminal, DecodeCounters* counters) {
    check_block_shape(blocks.size(), trellis);
    StageMetrics metrics(blocks.size());
    for (size_t v = 0; v < blocks.size(); ++v) {
        std::uint64_t solver_ops = 0;
        const Codeword decided = assignment_codeword(branch_and_bound(blocks[v], &solver_ops));
        if (counters) counters->solver_ops += solver_ops;
        if (terminal == TerminalMetric::RawCodeword) {
            metrics[v] = codeword_stage_metrics(decided, book);
        } else {
            std::uint64_t demap_ops = 0;
            const int row = book.demap_min_distance_row(decided, &demap_ops);
            if (counters) counters->demap_ops += demap_ops;
            metrics[v] = tuple_stage_metrics(Codebook::tuple_index(book.row(row).tuple), trellis.num_labels());
        }
    }
    return finish_block(trellis, metrics, counters);
}

}  // namespace

Bits decode_block_scheme1(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                          int g_max, DecodeCounters* counters) {
    return decode_psdd_block(blocks, book, trellis, g_max, TerminalMetric::RawCodeword, counters);
}

Bits decode_block_scheme2(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                          int g_max, DecodeCounters* counters) {
    return decode_psdd_block(blocks, book, trellis, g_max, TerminalMetric::Demapped, counters);
}

Bits decode_block_scheme3(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                          DecodeCounters* counters) {
    return decode_bb_block(blocks, book, trellis, TerminalMetric::RawCodeword, counters);
}

Bits decode_block_scheme4(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                          DecodeCounters* counters) {
    return decode_bb_block(blocks, book, trellis, TerminalMetric::Demapped, counters);
}

Bits decode_block_od(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                     bool demap, DecodeCounters* counters) {
    check_block_shape(blocks.size(), trellis);
    StageMetrics metrics(blocks.size());
    for (size_t v = 0; v < blocks.size(); ++v) {
        std::uint64_t solver_ops = 0;
        const BookDecision decision = brute_force_best(blocks[v], book, &solver_ops);
        if (counters) counters->solver_ops += solver_ops;
        if (demap) {
            metrics[v] = tuple_stage_metrics(Codebook::tuple_index(book.row(decision.row).tuple), trellis.num_labels());
        } else {
            metrics[v] = codeword_stage_metrics(book.row(decision.row).codeword, book);
        }
    }
    return finish_block(trellis, metrics, counters);
}

Bits decode_block_hd_ed(const std::vector<ReceivedMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                        DecodeCounters* counters) {
    check_block_shape(blocks.size(), trellis);
    StageMetrics metrics(blocks.size());
    for (size_t v = 0; v < blocks.size(); ++v) {
        const Codeword detected = envelope_detect(blocks[v]);
        if (counters) {
            counters->demod_ops += static_cast<std::uint64_t>(blocks[v].M()) * blocks[v].M();
            counters->solver_ops += static_cast<std::uint64_t>(book.size()) * book.M();
        }
        metrics[v] = codeword_stage_metrics(detected, book);
    }
    return finish_block(trellis, metrics, counters);
}

Bits decode_block_hd_td(const std::vector<DemodMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                        DecodeCounters* counters) {
    check_block_shape(blocks.size(), trellis);
    const int m = book.M();
    StageMetrics metrics(blocks.size());
    for (size_t v = 0; v < blocks.size(); ++v) {
        const DemodMatrix& r = blocks[v];
        if (counters) {
            counters->demod_ops += static_cast<std::uint64_t>(m) * m;
            // Full scan of the M x M matrix against each of the 2^n branches.
            counters->solver_ops += static_cast<std::uint64_t>(book.size()) * m * m;
        }
        std::vector<double>& row = metrics[v];
        row.resize(book.size());
        for (int label = 0; label < book.size(); ++label) {
            const Codeword& cw = book.codeword(label);
            int overlap = 0;
            for (int j = 0; j < m; ++j) overlap += r.cells(cw[j] - 1, j);
            row[label] = m - overlap;  // M - sum(s_ij AND r_ij)
        }
    }
    return finish_block(trellis, metrics, counters);
}

Bits decode_block(const SchemeConfig& cfg, const std::vector<ReceivedMatrix>& blocks, double tau,
                  const Codebook& book, const Trellis& trellis, DecodeCounters* counters, RngStream* tie_rng) {
    auto cost_blocks = [&]() {
        std::vector<CostMatrix> costs;
        costs.reserve(blocks.size());
        for (const ReceivedMatrix& y : blocks) {
            if (cfg.input == InputMode::Soft) {
                costs.push_back(build_cost_matrix(y));
            } else {
                if (counters) counters->demod_ops += static_cast<std::uint64_t>(y.M()) * y.M();
                costs.push_back(build_cost_matrix(threshold_detect(y, tau)));
            }
            if (tie_rng) {
                CostMatrix& c = costs.back();
                double max_abs = 0.0;
                for (int i = 0; i < c.M(); ++i)
                    for (int j = 0; j < c.M(); ++j) max_abs = std::max(max_abs, std::abs(c.cells(i, j)));
                const double eps = 1e-9 * (1.0 + max_abs);
                for (int i = 0; i < c.M(); ++i)
                    for (int j = 0; j < c.M(); ++j) c.cells(i, j) -= eps * tie_rng->uniform();
            }
        }
        return costs;
    };

    switch (cfg.id) {
        case SchemeId::HdEd:
            return decode_block_hd_ed(blocks, book, trellis, counters);
        case SchemeId::HdTd: {
            std::vector<DemodMatrix> demod;
            demod.reserve(blocks.size());
            for (const ReceivedMatrix& y : blocks) demod.push_back(threshold_detect(y, tau));
            return decode_block_hd_td(demod, book, trellis, counters);
        }
        case SchemeId::S1:
            return decode_block_scheme1(cost_blocks(), book, trellis, cfg.g_max, counters);
        case SchemeId::S2:
            return decode_block_scheme2(cost_blocks(), book, trellis, cfg.g_max, counters);
        case SchemeId::S3:
            return decode_block_scheme3(cost_blocks(), book, trellis, counters);
        case SchemeId::S4:
            return decode_block_scheme4(cost_blocks(), book, trellis, counters);
        case SchemeId::Od1:
            return decode_block_od(cost_blocks(), book, trellis, false, counters);
        case SchemeId::Od2:
            return decode_block_od(cost_blocks(), book, trellis, true, counters);
    }
    throw InputError("unhandled scheme");
}

}  // namespace ptc
