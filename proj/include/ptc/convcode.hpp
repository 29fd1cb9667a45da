#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptc/common.hpp"

namespace ptc {

/// Feedforward convolutional code: k input bits and n output bits per step,
/// constraint length K, and a k x n grid of octal tap vectors. The K - k
/// memory elements are split evenly across the k input shift registers.
///
/// Octal convention: each entry expands to a binary tap vector read MSB first,
/// with the most significant bit tapping the current input bit and later bits
/// tapping successively older register contents, e.g. (7 5) -> [111], [101].
struct ConvCodeSpec {
    int k = 1;
    int n = 2;
    int constraint_length = 3;
    std::vector<std::vector<unsigned>> generators;  // k rows of n octal values

    /// Generators given as printed, e.g. "7 5" or "1 3 0; 3 2 3".
    static ConvCodeSpec parse(int k, int n, int constraint_length, const std::string& octal_generators);

    void validate() const;  // throws ConfigError

    int memory_per_input() const { return (constraint_length - k) / k; }
    int num_states() const { return 1 << (constraint_length - k); }
    int num_inputs() const { return 1 << k; }
    int num_labels() const { return 1 << n; }
    double rate() const { return static_cast<double>(k) / n; }
};

struct Transition {
    int next = 0;
    unsigned label = 0;  // n output bits, first output bit in the MSB position
};

/// Immutable transition table; safe to share across concurrent decoders.
class Trellis {
  public:
    explicit Trellis(ConvCodeSpec spec);

    const ConvCodeSpec& spec() const { return spec_; }
    int num_states() const { return num_states_; }
    int num_inputs() const { return num_inputs_; }
    int num_labels() const { return spec_.num_labels(); }

    const Transition& transition(int state, int input) const {
        return table_[static_cast<size_t>(state) * num_inputs_ + input];
    }

    /// Zero-input steps appended per block so the encoder re-enters state 0.
    int flush_steps() const { return spec_.constraint_length - spec_.k; }

  private:
    ConvCodeSpec spec_;
    int num_states_;
    int num_inputs_;
    std::vector<Transition> table_;
};

/// Encode from the all-zero state. Message length must be a multiple of k.
Bits encode(const Trellis& trellis, const Bits& message);

/// Message followed by flush_steps() * k zero bits.
Bits append_flush(const Trellis& trellis, Bits message);

/// stage_metrics[v][label] is the branch metric for every n-bit output label
/// at stage v.
using StageMetrics = std::vector<std::vector<double>>;

/// Minimum accumulated-metric path from state 0, optionally pinned to a final
/// state. Survivor ties go to the lowest-numbered predecessor state; final
/// selection ties go to the lowest state index. Returns the path's input bits.
Bits viterbi_decode(const Trellis& trellis, const StageMetrics& stage_metrics,
                    std::optional<int> final_state = std::nullopt, std::uint64_t* ops = nullptr);

/// Distance between two branch output labels.
using LabelDistance = std::function<int(unsigned, unsigned)>;

/// Hamming distance between n-bit labels.
LabelDistance binary_label_distance();

/// Minimum accumulated label distance over paths that leave the all-zero-state
/// path and later re-merge with it (Dijkstra over the state graph).
/// Throws InputError if no re-merging path exists.
int free_distance(const Trellis& trellis, const LabelDistance& label_distance);

/// Path counts a_d versus the all-zero path for d <= max_distance. `complete`
/// is false when paths were still in flight at the internal stage bound.
struct WeightSpectrum {
    int dfree = 0;
    std::map<int, std::uint64_t> counts;
    bool complete = true;
};

WeightSpectrum distance_spectrum(const Trellis& trellis, const LabelDistance& label_distance,
                                 int max_distance);

}  // namespace ptc
