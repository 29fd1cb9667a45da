#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptc/assign.hpp"
#include "ptc/convcode.hpp"
#include "ptc/modem.hpp"
#include "ptc/permmap.hpp"
#include "ptc/rng.hpp"

namespace ptc {

enum class SchemeId { HdEd, HdTd, S1, S2, S3, S4, Od1, Od2 };

std::string to_string(SchemeId id);
SchemeId scheme_from_string(const std::string& name);  // "hd-ed", "s1", ...

enum class InputMode { Soft, Threshold };

struct SchemeConfig {
    SchemeId id = SchemeId::S1;
    int g_max = 1;
    InputMode input = InputMode::Soft;
};

/// Enforces g_max >= 1 and g_max <= 2^n (S3/S4 and the HD schemes ignore it).
void validate_scheme(const SchemeConfig& cfg, const Codebook& book);

/// Elementary-operation counts accumulated over one block decode.
struct DecodeCounters {
    std::uint64_t solver_ops = 0;   // Hungarian/Murty/BB or HD codebook compares
    std::uint64_t demap_ops = 0;    // min-distance demap compares
    std::uint64_t viterbi_ops = 0;  // add-compare-select steps
    std::uint64_t demod_ops = 0;    // per-cell detector decisions

    DecodeCounters& operator+=(const DecodeCounters& o) {
        solver_ops += o.solver_ops;
        demap_ops += o.demap_ops;
        viterbi_ops += o.viterbi_ops;
        demod_ops += o.demod_ops;
        return *this;
    }
};

/// Soft costs: y_ij -> -|y_ij|.
CostMatrix build_cost_matrix(const ReceivedMatrix& y);
/// Thresholded costs: r_ij -> -r_ij.
CostMatrix build_cost_matrix(const DemodMatrix& r);

struct PsddResult {
    Codeword codeword;
    bool in_book = false;
    int iterations = 0;
};

/// Hungarian first; while the ranked assignment's codeword is off-book, Murty
/// ranks the next one, up to g_max. Returns the last codeword examined with
/// in_book = false when the cap binds.
PsddResult psdd_decode(const CostMatrix& c, const Codebook& book, int g_max, std::uint64_t* solver_ops = nullptr);

/// The block decoders consume one cost/detector matrix per trellis stage
/// (message stages plus the flush stages), run Viterbi pinned to end state 0,
/// and return only the message bits.
Bits decode_block_scheme1(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                          int g_max, DecodeCounters* counters = nullptr);
Bits decode_block_scheme2(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                          int g_max, DecodeCounters* counters = nullptr);
Bits decode_block_scheme3(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                          DecodeCounters* counters = nullptr);
Bits decode_block_scheme4(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                          DecodeCounters* counters = nullptr);
/// Per-stage optimal decision over the book; demap = false feeds the codeword
/// to the non-binary metric (OD1), demap = true the binary tuple (OD2).
Bits decode_block_od(const std::vector<CostMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                     bool demap, DecodeCounters* counters = nullptr);

Bits decode_block_hd_ed(const std::vector<ReceivedMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                        DecodeCounters* counters = nullptr);
Bits decode_block_hd_td(const std::vector<DemodMatrix>& blocks, const Codebook& book, const Trellis& trellis,
                        DecodeCounters* counters = nullptr);

/// Applies the scheme's detector/input mode to raw channel outputs and
/// dispatches to the decoder above. tau is the threshold for bit-domain
/// detection. When tie_rng is given, each cost cell is lowered by a random
/// epsilon far below the cell resolution, so equal-cost assignments resolve
/// randomly instead of by column order.
Bits decode_block(const SchemeConfig& cfg, const std::vector<ReceivedMatrix>& blocks, double tau,
                  const Codebook& book, const Trellis& trellis, DecodeCounters* counters = nullptr,
                  RngStream* tie_rng = nullptr);

}  // namespace ptc
