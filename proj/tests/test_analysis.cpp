#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ptc/analysis.hpp"
#include "ptc/channel.hpp"
#include "ptc/rng.hpp"

using namespace ptc;

TEST_CASE("marcum q closed forms") {
    for (const double a : {0.0, 0.5, 1.7, 4.0}) CHECK(marcum_q1(a, 0.0) == 1.0);
    for (const double b : {0.1, 1.0, 2.5})
        CHECK(marcum_q1(0.0, b) == doctest::Approx(std::exp(-b * b / 2)).epsilon(1e-12));
    CHECK_THROWS_AS(marcum_q1(-1.0, 0.0), InputError);
    CHECK_THROWS_AS(marcum_q1(60.0, 1.0), InputError);  // a^2/2 beyond the supported range
}

TEST_CASE("marcum q matches adaptive quadrature on a coarse grid") {
    for (double a = 0.0; a <= 5.0; a += 1.0) {
        for (double b = 0.5; b <= 5.0; b += 1.0) {
            const double oracle_value = oracle::marcum_q1_quadrature(a, b);
            CHECK(std::abs(marcum_q1(a, b) - oracle_value) < 1e-9);
        }
    }
    CHECK(std::abs(marcum_q1(1.0, 1.0) - oracle::marcum_q1_quadrature(1.0, 1.0)) < 1e-10);
}

TEST_CASE("marcum q monotonicity and range") {
    double previous = 2.0;
    for (double b = 0.0; b <= 5.0; b += 0.25) {
        const double value = marcum_q1(2.0, b);
        CHECK(value >= 0.0);
        CHECK(value <= 1.0);
        CHECK(value <= previous + 1e-12);  // non-increasing in b
        previous = value;
    }
    previous = -1.0;
    for (double a = 0.0; a <= 5.0; a += 0.25) {
        const double value = marcum_q1(a, 2.0);
        CHECK(value >= previous - 1e-12);  // non-decreasing in a
        previous = value;
    }
}

TEST_CASE("detection probabilities") {
    const DetectionProbs high = detection_probs(1e5);
    CHECK(high.p11 == doctest::Approx(1.0));
    CHECK(high.p10 == doctest::Approx(0.0));

    const DetectionProbs unit = detection_probs(1.0);
    CHECK(unit.p10 == doctest::Approx(std::exp(-0.36)).epsilon(1e-12));
    CHECK(unit.p11 == doctest::Approx(marcum_q1(std::sqrt(2.0), 0.6 * std::sqrt(2.0))).epsilon(1e-12));
    CHECK(unit.p11 + unit.p01 == 1.0);
    CHECK(unit.p10 + unit.p00 == 1.0);
}

TEST_CASE("analytical symbol error probability limits") {
    const Codebook book = Codebook::table1_m3();
    CHECK(analytical_pe_hd(500.0, book) < 1e-12);
    CHECK(analytical_pe_hd(1.0, book) > 0.01);
    // Monotone in SNR over a coarse sweep.
    double previous = 1e9;
    for (double esn0_db = 0.0; esn0_db <= 12.0; esn0_db += 2.0) {
        const double pe = analytical_pe_hd(std::pow(10.0, esn0_db / 10.0), book);
        CHECK(pe <= previous + 1e-15);
        previous = pe;
    }
}

TEST_CASE("chance-level detection probabilities give the counting bound") {
    const Codebook book = Codebook::table1_m3();
    const DetectionProbs coin{0.5, 0.5, 0.5, 0.5};
    const double pe = analytical_pe_hd(coin, book);
    // Every received matrix is equally likely and only one codeword wins the
    // decision, so the per-codeword error mass is (2^n - 1)/2^n.
    const double chance = (book.size() - 1.0) / book.size();
    CHECK(pe == doctest::Approx(book.size() * chance / book.M()).epsilon(1e-12));
    CHECK(pe >= chance);
}

TEST_CASE("analytical pe agrees with a direct decision-rule simulation") {
    const Codebook book = Codebook::table1_m3();
    const double esn0 = std::pow(10.0, 1.0);  // 10 dB
    const double exact = analytical_pe_hd(esn0, book);

    const DetectionProbs p = detection_probs(esn0);
    RngStream rng(99, 0);
    const long long trials = 400000;
    long long errors = 0;
    for (long long t = 0; t < trials; ++t) {
        const int sent = static_cast<int>(rng.below(book.size()));
        const Codeword& cw = book.row(sent).codeword;
        // Sample the thresholded matrix cell by cell.
        Square<std::uint8_t> r(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = rng.bernoulli(cw[j] - 1 == i ? p.p11 : p.p10) ? 1 : 0;
        int best_overlap = -1, decision = 0;
        for (int q = 0; q < book.size(); ++q) {
            const Codeword& candidate = book.row(q).codeword;
            int overlap = 0;
            for (int j = 0; j < 3; ++j) overlap += r(candidate[j] - 1, j);
            if (overlap > best_overlap) {
                best_overlap = overlap;
                decision = q;
            }
        }
        errors += decision != sent;
    }
    const double mean_err = static_cast<double>(errors) / trials;
    const double estimate = mean_err * book.size() / book.M();  // printed prefactor
    const double sigma = std::sqrt(mean_err * (1.0 - mean_err) / trials) * book.size() / book.M();
    CHECK(std::abs(estimate - exact) <= 3.0 * sigma + 1e-9);
}

TEST_CASE("monte carlo fallback tracks the exact enumeration") {
    const Codebook book = Codebook::table1_m3();
    const double esn0 = std::pow(10.0, 0.6);
    const double exact = analytical_pe_hd(esn0, book);
    const double mc = analytical_pe_hd(esn0, book, PeMonteCarlo{300000, 5, 0.05});
    CHECK(mc == doctest::Approx(exact).epsilon(0.08));
}

TEST_CASE("m > 4 without the monte carlo flag is refused") {
    const Codebook m5 = Codebook::from_rows({{{0, 0}, {1, 2, 3, 4, 5}},
                                             {{0, 1}, {2, 3, 4, 5, 1}},
                                             {{1, 0}, {3, 4, 5, 1, 2}},
                                             {{1, 1}, {4, 5, 1, 2, 3}}},
                                            "m5_cyclic");
    CHECK_THROWS_AS(analytical_pe_hd(10.0, m5), RefusalError);
    CHECK(analytical_pe_hd(10.0, m5, PeMonteCarlo{20000, 3, 0.05}) > 0.0);
}

TEST_CASE("dfree bound vanishes at high SNR and grows with depth") {
    const ConvCodeSpec spec = ConvCodeSpec::parse(1, 2, 3, "7 5");
    const Codebook book = Codebook::table1_m3();
    CHECK(dfree_bound(30.0, spec, book).value < 1e-12);

    const DfreeBound shallow = dfree_bound(4.0, spec, book, 1);
    const DfreeBound deep = dfree_bound(4.0, spec, book, 10);
    CHECK(deep.value >= shallow.value);
    CHECK(shallow.dfree == free_distance(Trellis(spec), book.label_distance()));
    CHECK(deep.complete);
    CHECK(deep.spectrum.begin()->first == shallow.dfree);

    CHECK_THROWS_AS(dfree_bound(4.0, spec, Codebook::table1_m4(), 10), ConfigError);
}
