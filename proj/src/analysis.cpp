#include "ptc/analysis.hpp"

#include <bit>
#include <cmath>

#include "ptc/channel.hpp"
#include "ptc/modem.hpp"
#include "ptc/rng.hpp"

namespace ptc {

double marcum_q1(double a, double b) {
    if (a < 0.0 || b < 0.0) throw InputError("marcum_q1 needs a, b >= 0");
    if (b == 0.0) return 1.0;
    const double alpha = a * a / 2.0;
    const double beta = b * b / 2.0;
    if (alpha > 700.0 || beta > 700.0)
        throw InputError("marcum_q1 arguments out of the supported range (a^2/2, b^2/2 <= 700)");
    if (a == 0.0) return std::exp(-beta);

    // Q1(a,b) = sum_k Pois(k; alpha) * P(Pois(beta) <= k). All terms are
    // positive and the unaccounted outer mass bounds the remainder.
    double pois_alpha = std::exp(-alpha);  // Pois(k; alpha)
    double pois_beta = std::exp(-beta);    // Pois(k; beta)
    double cdf_beta = pois_beta;           // P(Pois(beta) <= k)
    double outer_mass = pois_alpha;
    double q = pois_alpha * cdf_beta;
    for (int k = 1; k < 100000; ++k) {
        pois_alpha *= alpha / k;
        pois_beta *= beta / k;
        cdf_beta += pois_beta;
        q += pois_alpha * cdf_beta;
        outer_mass += pois_alpha;
        if (1.0 - outer_mass < 1e-14 && k > alpha) break;
    }
    return std::min(q, 1.0);
}

DetectionProbs detection_probs(double esn0_linear) {
    if (!(esn0_linear > 0.0)) throw InputError("Es/N0 must be positive");
    DetectionProbs p;
    if (esn0_linear > 700.0) {
        p.p11 = 1.0;  // q -> 1 faster than double precision resolves
    } else {
        const double root = std::sqrt(2.0 * esn0_linear);
        p.p11 = marcum_q1(root, kThresholdScale * root);
    }
    p.p01 = 1.0 - p.p11;
    p.p10 = std::exp(-kThresholdScale * kThresholdScale * esn0_linear);
    p.p00 = 1.0 - p.p10;
    return p;
}

namespace {

/// Support bitmask of a codeword's M x M permutation matrix, cell (i, j) at
/// bit i * M + j.
std::uint64_t support_mask(const Codeword& cw) {
    const int m = static_cast<int>(cw.size());
    std::uint64_t mask = 0;
    for (int j = 0; j < m; ++j) mask |= std::uint64_t{1} << ((cw[j] - 1) * m + j);
    return mask;
}

double exact_pe(const DetectionProbs& p, const Codebook& book) {
    const int m = book.M();
    const int cells = m * m;
    const int q_count = book.size();
    std::vector<std::uint64_t> masks(q_count);
    for (int q = 0; q < q_count; ++q) masks[q] = support_mask(book.row(q).codeword);

    // Power tables keep degenerate probabilities (0 or 1) exact: 0^0 = 1.
    std::vector<double> pow11(m + 1), pow01(m + 1), pow10(cells + 1), pow00(cells + 1);
    for (int w = 0; w <= m; ++w) {
        pow11[w] = std::pow(p.p11, w);
        pow01[w] = std::pow(p.p01, w);
    }
    for (int w = 0; w <= cells; ++w) {
        pow10[w] = std::pow(p.p10, w);
        pow00[w] = std::pow(p.p00, w);
    }

    double total = 0.0;
    const std::uint64_t r_count = std::uint64_t{1} << cells;
    for (std::uint64_t r = 0; r < r_count; ++r) {
        // Minimum-distance decision: max overlap with the received ones,
        // lowest row on ties (same argmin as the matrix Hamming distance).
        int decision = 0;
        int best_overlap = -1;
        for (int q = 0; q < q_count; ++q) {
            const int overlap = std::popcount(masks[q] & r);
            if (overlap > best_overlap) {
                best_overlap = overlap;
                decision = q;
            }
        }
        const int ones = std::popcount(r);
        for (int q = 0; q < q_count; ++q) {
            if (decision == q) continue;
            const int w11 = std::popcount(masks[q] & r);
            const int w01 = m - w11;            // signal cells detected 0
            const int w10 = ones - w11;         // noise cells detected 1
            const int w00 = (cells - m) - w10;  // noise cells detected 0
            total += pow11[w11] * pow01[w01] * pow10[w10] * pow00[w00];
        }
    }
    return total / m;
}

double monte_carlo_pe(const DetectionProbs& p, const Codebook& book, const PeMonteCarlo& mc) {
    const int m = book.M();
    const int q_count = book.size();
    std::vector<std::vector<std::uint8_t>> supports(q_count, std::vector<std::uint8_t>(m * m, 0));
    for (int q = 0; q < q_count; ++q) {
        const Codeword& cw = book.row(q).codeword;
        for (int j = 0; j < m; ++j) supports[q][(cw[j] - 1) * m + j] = 1;
    }

    RngStream rng(mc.seed, 0x9e0);
    double total = 0.0;
    std::vector<std::uint8_t> received(m * m);
    for (long long trial = 0; trial < mc.samples; ++trial) {
        const int sent = static_cast<int>(rng.below(q_count));
        double weight = 1.0;
        for (int cell = 0; cell < m * m; ++cell) {
            const bool signal = supports[sent][cell];
            const double p_one = signal ? p.p11 : p.p10;
            // Importance-sample rare flips with a floored probability.
            double q_one = std::min(std::max(p_one, mc.bias_floor), 1.0 - mc.bias_floor);
            const bool one = rng.bernoulli(q_one);
            received[cell] = one;
            weight *= one ? p_one / q_one : (1.0 - p_one) / (1.0 - q_one);
        }
        int decision = 0, best_overlap = -1;
        for (int q = 0; q < q_count; ++q) {
            int overlap = 0;
            for (int cell = 0; cell < m * m; ++cell) overlap += supports[q][cell] & received[cell];
            if (overlap > best_overlap) {
                best_overlap = overlap;
                decision = q;
            }
        }
        if (decision != sent) total += weight;
    }
    // Each transmitted index was sampled with probability 1/2^n; the printed
    // sum runs over all indices, so scale by 2^n before the 1/M prefactor.
    return total / static_cast<double>(mc.samples) * q_count / m;
}

}  // namespace

double analytical_pe_hd(double esn0_linear, const Codebook& book, const std::optional<PeMonteCarlo>& mc) {
    const DetectionProbs p = detection_probs(esn0_linear);
    if (book.M() <= 4) return exact_pe(p, book);
    if (!mc) throw RefusalError("exact enumeration over 2^(M^2) is limited to M <= 4; pass the Monte Carlo option");
    return monte_carlo_pe(p, book, *mc);
}

double analytical_pe_hd(const DetectionProbs& probs, const Codebook& book) {
    if (book.M() > 4) throw RefusalError("exact enumeration over 2^(M^2) is limited to M <= 4");
    return exact_pe(probs, book);
}

DfreeBound dfree_bound(double ebno_db, const ConvCodeSpec& spec, const Codebook& book, int depth) {
    if (depth < 1) throw InputError("depth must be >= 1");
    if (spec.n != book.n()) throw ConfigError("code n does not match codebook n");
    const Trellis trellis(spec);
    const LabelDistance dist = book.label_distance();

    DfreeBound bound;
    const int dfree = free_distance(trellis, dist);
    const WeightSpectrum spectrum = distance_spectrum(trellis, dist, dfree + depth - 1);
    bound.dfree = dfree;
    bound.complete = spectrum.complete;
    bound.spectrum = spectrum.counts;

    const double rate_p = static_cast<double>(spec.k) / book.M();
    const double esn0 = std::pow(10.0, ebno_to_esno(ebno_db, rate_p, book.M()) / 10.0);
    const double scale = rate_p / book.M() * esn0;
    const auto pairwise = [scale](int d_h) { return 0.5 * std::erfc(std::sqrt(scale * d_h)); };

    double total = 0.0;
    for (const auto& [d, count] : spectrum.counts) {
        // Sum of pairwise terms from d/2+1 to d, plus the halved d/2 term for
        // even d, as printed.
        double p2 = 0.0;
        for (int e = d / 2 + 1; e <= d; ++e) p2 += pairwise(e);
        if (d % 2 == 0) p2 += 0.5 * pairwise(d / 2);
        total += static_cast<double>(count) * p2;
    }
    bound.value = total;
    return bound;
}

}  // namespace ptc
