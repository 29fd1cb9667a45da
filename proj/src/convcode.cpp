#include "ptc/convcode.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <queue>
#include <sstream>

namespace ptc {

namespace {

unsigned octal_to_binary(unsigned octal) {
    unsigned out = 0;
    unsigned shift = 0;
    for (unsigned digit = octal; digit > 0; digit /= 10) {
        if (digit % 10 > 7) throw ConfigError("generator " + std::to_string(octal) + " is not octal");
        out |= (digit % 10) << shift;
        shift += 3;
    }
    return out;
}

int bit_length(unsigned v) {
    return v == 0 ? 0 : std::bit_width(v);
}

}  // namespace

ConvCodeSpec ConvCodeSpec::parse(int k, int n, int constraint_length, const std::string& octal_generators) {
    ConvCodeSpec spec;
    spec.k = k;
    spec.n = n;
    spec.constraint_length = constraint_length;

    std::stringstream rows(octal_generators);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::vector<unsigned> taps;
        std::stringstream ss(row);
        unsigned value;
        while (ss >> value) taps.push_back(value);
        if (!ss.eof()) throw ConfigError("cannot parse generators '" + octal_generators + "'");
        if (!taps.empty()) spec.generators.push_back(std::move(taps));
    }
    spec.validate();
    return spec;
}

void ConvCodeSpec::validate() const {
    if (k < 1) throw ConfigError("k must be >= 1");
    if (n < k) throw ConfigError("n must be >= k");
    if (constraint_length < k) throw ConfigError("constraint length must be >= k");
    if ((constraint_length - k) % k != 0)
        throw ConfigError("memory " + std::to_string(constraint_length - k) + " does not divide evenly over " +
                          std::to_string(k) + " inputs");
    if (static_cast<int>(generators.size()) != k) throw ConfigError("expected k generator rows");
    const int taps_per_input = memory_per_input() + 1;
    for (const auto& row : generators) {
        if (static_cast<int>(row.size()) != n) throw ConfigError("expected n generators per row");
        for (unsigned octal : row) {
            const unsigned binary = octal_to_binary(octal);
            if (bit_length(binary) > taps_per_input)
                throw ConfigError("generator " + std::to_string(octal) + " taps beyond the register (max " +
                                  std::to_string(taps_per_input) + " bits)");
        }
    }
}

Trellis::Trellis(ConvCodeSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    num_states_ = spec_.num_states();
    num_inputs_ = spec_.num_inputs();
    const int m = spec_.memory_per_input();
    const int k = spec_.k;
    const int n = spec_.n;

    std::vector<std::vector<unsigned>> taps(k, std::vector<unsigned>(n));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) taps[i][j] = octal_to_binary(spec_.generators[i][j]);

    table_.resize(static_cast<size_t>(num_states_) * num_inputs_);
    const unsigned reg_mask = m > 0 ? (1u << m) - 1 : 0u;
    for (int state = 0; state < num_states_; ++state) {
        for (int input = 0; input < num_inputs_; ++input) {
            unsigned label = 0;
            int next = 0;
            for (int j = 0; j < n; ++j) {
                unsigned bit = 0;
                for (int i = 0; i < k; ++i) {
                    // Register window for input i: current bit on top of its m
                    // state bits, newest first. Input/state bit 0 is stream 0's
                    // MSB so state labels read newest-first, e.g. 00 -1-> 10.
                    const unsigned u = (static_cast<unsigned>(input) >> (k - 1 - i)) & 1u;
                    const unsigned reg = m > 0 ? (static_cast<unsigned>(state) >> ((k - 1 - i) * m)) & reg_mask : 0u;
                    const unsigned window = (u << m) | reg;
                    bit ^= static_cast<unsigned>(std::popcount(window & taps[i][j])) & 1u;
                }
                label |= bit << (n - 1 - j);
            }
            if (m > 0) {
                for (int i = 0; i < k; ++i) {
                    const unsigned u = (static_cast<unsigned>(input) >> (k - 1 - i)) & 1u;
                    const unsigned reg = (static_cast<unsigned>(state) >> ((k - 1 - i) * m)) & reg_mask;
                    const unsigned next_reg = ((u << (m - 1)) | (reg >> 1)) & reg_mask;
                    next |= static_cast<int>(next_reg) << ((k - 1 - i) * m);
                }
            }
            table_[static_cast<size_t>(state) * num_inputs_ + input] = {next, label};
        }
    }
}

Bits encode(const Trellis& trellis, const Bits& message) {
    const int k = trellis.spec().k;
    const int n = trellis.spec().n;
    if (message.size() % k != 0)
        throw InputError("message length " + std::to_string(message.size()) + " is not a multiple of k=" +
                         std::to_string(k));
    Bits out;
    out.reserve(message.size() / k * n);
    int state = 0;
    for (size_t pos = 0; pos < message.size(); pos += k) {
        unsigned input = 0;
        for (int i = 0; i < k; ++i) input = (input << 1) | message[pos + i];
        const Transition& t = trellis.transition(state, static_cast<int>(input));
        for (int j = n - 1; j >= 0; --j) out.push_back((t.label >> j) & 1u);
        state = t.next;
    }
    return out;
}

Bits append_flush(const Trellis& trellis, Bits message) {
    message.insert(message.end(), static_cast<size_t>(trellis.flush_steps()) * trellis.spec().k, 0);
    return message;
}

Bits viterbi_decode(const Trellis& trellis, const StageMetrics& stage_metrics,
                    std::optional<int> final_state, std::uint64_t* ops) {
    const int states = trellis.num_states();
    const int inputs = trellis.num_inputs();
    const int labels = trellis.num_labels();
    const int stages = static_cast<int>(stage_metrics.size());
    constexpr double kInf = std::numeric_limits<double>::infinity();

    for (int v = 0; v < stages; ++v)
        if (static_cast<int>(stage_metrics[v].size()) != labels)
            throw InputError("stage " + std::to_string(v) + " metric table has " +
                             std::to_string(stage_metrics[v].size()) + " entries, expected " +
                             std::to_string(labels));

    std::vector<double> metric_prev(states, kInf), metric_cur(states, kInf);
    metric_prev[0] = 0.0;
    struct Decision {
        int pred = -1;
        int input = 0;
    };
    std::vector<Decision> decisions(static_cast<size_t>(stages) * states);
    std::uint64_t acs = 0;

    for (int v = 0; v < stages; ++v) {
        std::fill(metric_cur.begin(), metric_cur.end(), kInf);
        for (int s = 0; s < states; ++s) {
            if (metric_prev[s] == kInf) continue;
            for (int u = 0; u < inputs; ++u) {
                const Transition& t = trellis.transition(s, u);
                const double candidate = metric_prev[s] + stage_metrics[v][t.label];
                ++acs;
                // Strict < plus ascending predecessor scan breaks ties toward
                // the lowest-numbered predecessor state.
                if (candidate < metric_cur[t.next]) {
                    metric_cur[t.next] = candidate;
                    decisions[static_cast<size_t>(v) * states + t.next] = {s, u};
                }
            }
        }
        metric_prev.swap(metric_cur);
    }
    if (ops) *ops += acs;

    int best_state = 0;
    if (final_state) {
        best_state = *final_state;
        if (metric_prev[best_state] == kInf) throw InputError("no path reaches the requested final state");
    } else {
        double best = kInf;
        for (int s = 0; s < states; ++s) {
            if (metric_prev[s] < best) {
                best = metric_prev[s];
                best_state = s;
            }
        }
    }

    const int k = trellis.spec().k;
    Bits message(static_cast<size_t>(stages) * k);
    int state = best_state;
    for (int v = stages - 1; v >= 0; --v) {
        const Decision& d = decisions[static_cast<size_t>(v) * states + state];
        for (int i = 0; i < k; ++i) message[static_cast<size_t>(v) * k + i] = (d.input >> (k - 1 - i)) & 1;
        state = d.pred;
    }
    return message;
}

LabelDistance binary_label_distance() {
    return [](unsigned a, unsigned b) { return std::popcount(a ^ b); };
}

int free_distance(const Trellis& trellis, const LabelDistance& label_distance) {
    const int states = trellis.num_states();
    const int inputs = trellis.num_inputs();
    const unsigned zero_label = trellis.transition(0, 0).label;

    if (states == 1) {
        // Single-state code: every nonzero input is an immediate loop.
        int best = std::numeric_limits<int>::max();
        for (int u = 1; u < inputs; ++u) best = std::min(best, label_distance(trellis.transition(0, u).label, zero_label));
        if (best == std::numeric_limits<int>::max()) throw InputError("trellis has no diverging transition");
        return best;
    }

    constexpr int kUnreached = std::numeric_limits<int>::max();
    std::vector<int> dist(states, kUnreached);
    using Item = std::pair<int, int>;  // (distance, state)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;

    int best = kUnreached;
    for (int u = 1; u < inputs; ++u) {
        const Transition& t = trellis.transition(0, u);
        const int d = label_distance(t.label, zero_label);
        if (t.next == 0) {
            best = std::min(best, d);  // immediate re-merge
        } else if (d < dist[t.next]) {
            dist[t.next] = d;
            queue.emplace(d, t.next);
        }
    }
    while (!queue.empty()) {
        auto [d, s] = queue.top();
        queue.pop();
        if (d > dist[s] || d >= best) continue;
        for (int u = 0; u < inputs; ++u) {
            const Transition& t = trellis.transition(s, u);
            const int nd = d + label_distance(t.label, zero_label);
            if (t.next == 0) {
                best = std::min(best, nd);
            } else if (nd < dist[t.next]) {
                dist[t.next] = nd;
                queue.emplace(nd, t.next);
            }
        }
    }
    if (best == kUnreached) throw InputError("no re-merging path found; code looks degenerate");
    return best;
}

WeightSpectrum distance_spectrum(const Trellis& trellis, const LabelDistance& label_distance,
                                 int max_distance) {
    WeightSpectrum spectrum;
    spectrum.dfree = free_distance(trellis, label_distance);

    const int states = trellis.num_states();
    const int inputs = trellis.num_inputs();
    const unsigned zero_label = trellis.transition(0, 0).label;
    // Paths still in flight past this many stages can only be zero-weight
    // loops (catastrophic); flag the result incomplete instead of spinning.
    const int max_stages = (max_distance + 2) * states + trellis.spec().constraint_length;

    // counts[state][d] = number of live paths at this stage with accumulated
    // distance d that have not yet re-merged with state 0.
    using Row = std::vector<std::uint64_t>;
    std::vector<Row> live(states, Row(max_distance + 1, 0));
    bool any_live = false;
    for (int u = 1; u < inputs; ++u) {
        const Transition& t = trellis.transition(0, u);
        const int d = label_distance(t.label, zero_label);
        if (d > max_distance) continue;
        if (t.next == 0) {
            spectrum.counts[d] += 1;
        } else {
            live[t.next][d] += 1;
            any_live = true;
        }
    }

    for (int stage = 0; stage < max_stages && any_live; ++stage) {
        std::vector<Row> next(states, Row(max_distance + 1, 0));
        any_live = false;
        for (int s = 1; s < states; ++s) {
            for (int d = 0; d <= max_distance; ++d) {
                const std::uint64_t paths = live[s][d];
                if (paths == 0) continue;
                for (int u = 0; u < inputs; ++u) {
                    const Transition& t = trellis.transition(s, u);
                    const int nd = d + label_distance(t.label, zero_label);
                    if (nd > max_distance) continue;
                    if (t.next == 0) {
                        spectrum.counts[nd] += paths;
                    } else {
                        next[t.next][nd] += paths;
                        any_live = true;
                    }
                }
            }
        }
        live.swap(next);
    }
    spectrum.complete = !any_live;
    return spectrum;
}

}  // namespace ptc
