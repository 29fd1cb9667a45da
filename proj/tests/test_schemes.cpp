#include <doctest.h>

#include <cmath>

#include "ptc/channel.hpp"
#include "ptc/schemes.hpp"

using namespace ptc;

#ifndef PTC_DATA_DIR
#define PTC_DATA_DIR "data"
#endif

namespace {

const ConvCodeSpec kRate12 = ConvCodeSpec::parse(1, 2, 3, "7 5");
const ConvCodeSpec kRate23 = ConvCodeSpec::parse(2, 3, 4, "1 3 0; 3 2 3");
const ConvCodeSpec kRate14 = ConvCodeSpec::parse(1, 4, 6, "53 67 71 75");

Codebook dpm_book() {
    return Codebook::load(std::string(PTC_DATA_DIR) + "/codebooks/m4_n4_dpm.txt");
}

CostMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    CostMatrix c{Square<double>(static_cast<int>(rows.size()))};
    for (int i = 0; i < c.M(); ++i)
        for (int j = 0; j < c.M(); ++j) c.cells(i, j) = rows[i][j];
    return c;
}

/// Per-stage output labels of an encoded-with-flush message.
std::vector<unsigned> stage_labels(const Trellis& trellis, const Bits& message) {
    const Bits coded = encode(trellis, append_flush(trellis, message));
    const int n = trellis.spec().n;
    std::vector<unsigned> labels(coded.size() / n);
    for (size_t v = 0; v < labels.size(); ++v) {
        unsigned label = 0;
        for (int j = 0; j < n; ++j) label = (label << 1) | coded[v * n + j];
        labels[v] = label;
    }
    return labels;
}

DemodMatrix exact_support(const Codeword& cw, int m) {
    DemodMatrix r{Square<std::uint8_t>(m)};
    for (int j = 0; j < m; ++j) r.cells(cw[j] - 1, j) = 1;
    return r;
}

/// Noiseless thresholded costs: -1 on the transmitted support.
std::vector<CostMatrix> noiseless_threshold_costs(const Trellis& trellis, const Codebook& book,
                                                  const Bits& message) {
    std::vector<CostMatrix> costs;
    for (const unsigned label : stage_labels(trellis, message))
        costs.push_back(build_cost_matrix(exact_support(book.codeword(label), book.M())));
    return costs;
}

std::vector<ReceivedMatrix> noiseless_received(const Trellis& trellis, const Codebook& book, const Bits& message,
                                               double es = 1.0) {
    std::vector<ReceivedMatrix> blocks;
    for (const unsigned label : stage_labels(trellis, message)) {
        const CodeMatrix s = modulate(book.codeword(label), es);
        ReceivedMatrix y{Square<Complex>(book.M())};
        for (int i = 0; i < book.M(); ++i)
            for (int j = 0; j < book.M(); ++j) y.cells(i, j) = s.cells(i, j);
        blocks.push_back(std::move(y));
    }
    return blocks;
}

Bits random_message(int bits, RngStream& rng) {
    Bits msg(bits);
    for (auto& b : msg) b = rng.next_u64() & 1;
    return msg;
}

}  // namespace

TEST_CASE("cost matrices from soft and thresholded inputs") {
    const CodeMatrix s = modulate(codeword_from_string("123"), 4.0);
    ReceivedMatrix y{Square<Complex>(3)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) y.cells(i, j) = s.cells(i, j);
    const CostMatrix soft = build_cost_matrix(y);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(soft.cells(i, j) == (i == j ? -2.0 : 0.0));

    DemodMatrix r{Square<std::uint8_t>(4)};
    r.cells(0, 0) = 1;
    r.cells(3, 2) = 1;
    const CostMatrix hard = build_cost_matrix(r);
    CHECK(hard.cells(0, 0) == -1.0);
    CHECK(hard.cells(3, 2) == -1.0);
    CHECK(hard.cells(1, 1) == 0.0);

    DemodMatrix zero{Square<std::uint8_t>(3)};
    const CostMatrix tied = build_cost_matrix(zero);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(tied.cells(i, j) == 0.0);
}

TEST_CASE("psdd returns the optimum when it is in the book") {
    const Codebook book = Codebook::table1_m3();
    const CostMatrix c = from_rows({{0, 0, -1}, {-1, 0, 0}, {0, -1, 0}});  // noiseless 231
    const PsddResult r = psdd_decode(c, book, 1);
    CHECK(r.codeword == codeword_from_string("231"));
    CHECK(r.in_book);
    CHECK(r.iterations == 1);
}

TEST_CASE("psdd ranks past an off-book optimum") {
    const Codebook book = Codebook::table1_m3();
    // Best assignment is 312 (off-book, cost -30); second-best is 213
    // (in-book row 3, cost -28); everything else is far worse.
    const CostMatrix c = from_rows({{0, -10, 0}, {-9, 0, -10}, {-10, 0, -9}});

    const PsddResult capped = psdd_decode(c, book, 1);
    CHECK(capped.codeword == codeword_from_string("312"));
    CHECK_FALSE(capped.in_book);
    CHECK(capped.iterations == 1);

    const PsddResult ranked = psdd_decode(c, book, 4);
    CHECK(ranked.codeword == codeword_from_string("213"));
    CHECK(ranked.in_book);
    CHECK(ranked.iterations == 2);
}

TEST_CASE("in-book psdd output has a zero stage metric against exactly one branch") {
    const Codebook book = Codebook::table1_m3();
    RngStream rng(12, 0);
    for (int trial = 0; trial < 100; ++trial) {
        CostMatrix c{Square<double>(3)};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c.cells(i, j) = -rng.uniform();
        const PsddResult r = psdd_decode(c, book, 4);
        if (!r.in_book) continue;
        int zeros = 0;
        for (int label = 0; label < book.size(); ++label)
            zeros += hamming_distance(book.codeword(label), r.codeword) == 0;
        CHECK(zeros == 1);
    }
}

TEST_CASE("noiseless blocks recover the message through every scheme") {
    struct Config {
        ConvCodeSpec spec;
        Codebook book;
    };
    const Config configs[] = {
        {kRate12, Codebook::table1_m3()}, {kRate23, Codebook::table1_m4()}, {kRate14, dpm_book()}};
    RngStream rng(21, 0);
    for (const Config& cfg : configs) {
        const Trellis trellis(cfg.spec);
        for (int trial = 0; trial < 4; ++trial) {
            const Bits msg = random_message(24, rng);
            const auto received = noiseless_received(trellis, cfg.book, msg);
            const auto costs = noiseless_threshold_costs(trellis, cfg.book, msg);
            const int g_max = cfg.book.size();

            CHECK(decode_block_scheme1(costs, cfg.book, trellis, g_max) == msg);
            CHECK(decode_block_scheme2(costs, cfg.book, trellis, g_max) == msg);
            CHECK(decode_block_scheme3(costs, cfg.book, trellis) == msg);
            CHECK(decode_block_scheme4(costs, cfg.book, trellis) == msg);
            CHECK(decode_block_od(costs, cfg.book, trellis, false) == msg);
            CHECK(decode_block_od(costs, cfg.book, trellis, true) == msg);

            std::vector<DemodMatrix> demod;
            for (const unsigned label : stage_labels(trellis, msg))
                demod.push_back(exact_support(cfg.book.codeword(label), cfg.book.M()));
            CHECK(decode_block_hd_td(demod, cfg.book, trellis) == msg);
            CHECK(decode_block_hd_ed(received, cfg.book, trellis) == msg);
        }
    }
}

TEST_CASE("a single corrupted stage is absorbed by the branch metrics") {
    const Codebook book = Codebook::table1_m3();
    const Trellis trellis(kRate12);
    const Bits msg = bits_from_string("10110100");
    auto costs = noiseless_threshold_costs(trellis, book, msg);
    // Blank out one stage entirely: the PSDD output there is arbitrary, the
    // accumulated Hamming metric still singles out the true path.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) costs[3].cells(i, j) = 0.0;
    CHECK(decode_block_scheme1(costs, book, trellis, 4) == msg);
    CHECK(decode_block_scheme2(costs, book, trellis, 4) == msg);
}

TEST_CASE("worked impulse-noise stage inside a block still decodes") {
    const Codebook book = dpm_book();
    const Trellis trellis(kRate14);
    // Search a short message whose encoded labels include 0010, the tuple
    // mapped onto 3214 that the worked matrices assume.
    Bits msg;
    size_t hit_stage = 0;
    for (unsigned word = 0; word < 256 && msg.empty(); ++word) {
        Bits candidate(8);
        for (int i = 0; i < 8; ++i) candidate[i] = (word >> i) & 1;
        const auto labels = stage_labels(trellis, candidate);
        for (size_t v = 0; v < labels.size(); ++v) {
            if (labels[v] == 0b0010) {
                msg = candidate;
                hit_stage = v;
                break;
            }
        }
    }
    REQUIRE(!msg.empty());

    auto costs = noiseless_threshold_costs(trellis, book, msg);
    // Replace the 3214 stage with the impulse-hit pattern: slot t4 lights up
    // across all frequencies on top of the transmitted support.
    costs[hit_stage] = from_rows({{0, 0, -1, -1}, {0, -1, 0, -1}, {-1, 0, 0, -1}, {0, 0, 0, -1}});
    CHECK(decode_block_scheme1(costs, book, trellis, 1) == msg);
    CHECK(decode_block_scheme2(costs, book, trellis, 1) == msg);

    // The NBI-hit variant drives schemes 3 and 4 through branch and bound.
    costs[hit_stage] = from_rows({{-1, -1, -1, -1}, {0, -1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, -1}});
    CHECK(decode_block_scheme3(costs, book, trellis) == msg);
    CHECK(decode_block_scheme4(costs, book, trellis) == msg);
    CHECK(decode_block_od(costs, book, trellis, false) == msg);
}

TEST_CASE("scheme 3 tracks scheme 1 closely at high SNR") {
    const Codebook book = Codebook::table1_m3();
    const Trellis trellis(kRate12);
    ChannelParams params{ebno_to_esno(10.0, 1.0 / 3.0, 3), 1.0, 0.0, 0.0, std::nullopt};
    RngStream rng(33, 0);
    long long agreed_bits = 0, total_bits = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const Bits msg = random_message(40, rng);
        std::vector<CostMatrix> costs;
        for (const unsigned label : stage_labels(trellis, msg)) {
            const CodeMatrix s = modulate(book.codeword(label), 1.0);
            costs.push_back(build_cost_matrix(transmit_awgn(s, params, rng)));
        }
        const Bits s1 = decode_block_scheme1(costs, book, trellis, 4);
        const Bits s3 = decode_block_scheme3(costs, book, trellis);
        for (size_t i = 0; i < msg.size(); ++i) agreed_bits += s1[i] == s3[i];
        total_bits += static_cast<long long>(msg.size());
    }
    CHECK(static_cast<double>(agreed_bits) / static_cast<double>(total_bits) >= 0.99);
}

TEST_CASE("HD-TD metric extremes") {
    const Codebook book = Codebook::table1_m4();
    const Trellis trellis(kRate23);
    // All-ones matrix (NBI saturation): every branch overlaps fully, metric 0
    // everywhere, so the decoder falls back to the tie-break path.
    std::vector<DemodMatrix> saturated(8, DemodMatrix{Square<std::uint8_t>(4)});
    for (auto& r : saturated)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.cells(i, j) = 1;
    const Bits decoded = decode_block_hd_td(saturated, book, trellis);
    CHECK(decoded == Bits(decoded.size(), 0));

    // Identical support scores 0; shifting every row scores the full M.
    const Codeword cw = book.codeword(0);
    const DemodMatrix same = exact_support(cw, 4);
    int overlap_same = 0, overlap_shift = 0;
    DemodMatrix shifted{Square<std::uint8_t>(4)};
    for (int j = 0; j < 4; ++j) shifted.cells(cw[j] % 4, j) = 1;
    for (int j = 0; j < 4; ++j) {
        overlap_same += same.cells(cw[j] - 1, j);
        overlap_shift += shifted.cells(cw[j] - 1, j);
    }
    CHECK(4 - overlap_same == 0);
    CHECK(4 - overlap_shift == 4);
}

TEST_CASE("scheme 1 with exhausted ranking equals the optimal decision") {
    // With g_max = 2^n the ranked search reaches an in-book codeword before
    // the cap on these books (at most M! - 2^n off-book assignments precede
    // it), so stage decisions coincide with the brute-force optimum.
    struct Config {
        ConvCodeSpec spec;
        Codebook book;
        double rate_p;
    };
    const Config configs[] = {{kRate12, Codebook::table1_m3(), 1.0 / 3.0}, {kRate14, dpm_book(), 0.25}};
    for (const Config& cfg : configs) {
        const Trellis trellis(cfg.spec);
        ChannelParams params{ebno_to_esno(3.0, cfg.rate_p, cfg.book.M()), 1.0, 0.0, 0.0, std::nullopt};
        RngStream rng(44, 0);
        for (int trial = 0; trial < 60; ++trial) {
            const Bits msg = random_message(20, rng);
            std::vector<CostMatrix> costs;
            for (const unsigned label : stage_labels(trellis, msg)) {
                const CodeMatrix s = modulate(cfg.book.codeword(label), 1.0);
                costs.push_back(build_cost_matrix(transmit_awgn(s, params, rng)));
            }
            CHECK(decode_block_scheme1(costs, cfg.book, trellis, cfg.book.size()) ==
                  decode_block_od(costs, cfg.book, trellis, false));
        }
    }
}

TEST_CASE("decoded length always equals the message length") {
    const Codebook book = Codebook::table1_m4();
    const Trellis trellis(kRate23);
    RngStream rng(55, 0);
    for (const int bits : {2, 10, 40}) {
        const Bits msg = random_message(bits, rng);
        ChannelParams params{0.0, 1.0, 0.0, 0.0, std::nullopt};  // very noisy
        std::vector<ReceivedMatrix> received;
        for (const unsigned label : stage_labels(trellis, msg)) {
            const CodeMatrix s = modulate(book.codeword(label), 1.0);
            received.push_back(transmit_awgn(s, params, rng));
        }
        for (const SchemeId id : {SchemeId::HdEd, SchemeId::HdTd, SchemeId::S1, SchemeId::S2, SchemeId::S3,
                                  SchemeId::S4, SchemeId::Od1, SchemeId::Od2}) {
            const SchemeConfig cfg{id, book.size(), InputMode::Threshold};
            CHECK(decode_block(cfg, received, 0.6, book, trellis).size() == msg.size());
        }
    }
}

TEST_CASE("scheme config validation caps g_max at 2^n") {
    const Codebook book = Codebook::table1_m3();
    CHECK_THROWS_AS(validate_scheme({SchemeId::S1, 5, InputMode::Soft}, book), ConfigError);
    CHECK_THROWS_AS(validate_scheme({SchemeId::S1, 0, InputMode::Soft}, book), ConfigError);
    CHECK_NOTHROW(validate_scheme({SchemeId::S1, 4, InputMode::Soft}, book));
}

TEST_CASE("scheme names round-trip") {
    for (const SchemeId id : {SchemeId::HdEd, SchemeId::HdTd, SchemeId::S1, SchemeId::S2, SchemeId::S3, SchemeId::S4,
                              SchemeId::Od1, SchemeId::Od2})
        CHECK(scheme_from_string(to_string(id)) == id);
    CHECK_THROWS_AS(scheme_from_string("s9"), ConfigError);
}
