#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "ptc/convcode.hpp"
#include "ptc/permmap.hpp"

namespace ptc {

/// First-order Marcum Q function, Q1(a, b) = int_b^inf x exp(-(x^2+a^2)/2) I0(ax) dx,
/// evaluated as a Poisson-weighted sum of incomplete-gamma terms to absolute
/// error below 1e-10. Supported for a^2/2 and b^2/2 up to 700.
double marcum_q1(double a, double b);

/// Threshold-detector cell statistics at tau = 0.6 sqrt(Es):
///   p11 = P(|y| >= tau | signal)  = Q1(sqrt(2 Es/N0), 0.6 sqrt(2 Es/N0))
///   p10 = P(|y| >= tau | noise)   = exp(-0.36 Es/N0)
/// with p01, p00 the complements.
struct DetectionProbs {
    double p11 = 0, p01 = 0, p10 = 0, p00 = 0;
};
DetectionProbs detection_probs(double esn0_linear);

/// Monte Carlo estimation controls for the M > 4 fallback. Cell flips are
/// importance-sampled with probability at least `bias_floor` and reweighted.
struct PeMonteCarlo {
    long long samples = 200000;
    std::uint64_t seed = 7;
    double bias_floor = 0.05;
};

/// Analytical symbol error probability of the threshold detector followed by
/// the minimum-distance codebook decision, summed over all 2^(M^2) received
/// bit matrices with the printed 1/M prefactor. Exact for M <= 4; larger M
/// requires the Monte Carlo option (RefusalError otherwise).
double analytical_pe_hd(double esn0_linear, const Codebook& book,
                        const std::optional<PeMonteCarlo>& mc = std::nullopt);

/// Same enumeration with explicitly supplied cell probabilities (exact path
/// only); also the hook for degenerate-probability analyses.
double analytical_pe_hd(const DetectionProbs& probs, const Codebook& book);

/// Truncated union bound on the mapped code's error probability. Enumerates
/// the weight spectrum a_d from d'_free for `depth` distance terms and sums
/// a_d * P2(d) with the pairwise complementary-error-function term at
/// sqrt((R_P / M) * Es/N0 * d_H). `complete` is false when the spectrum
/// enumeration hit its internal stage bound.
struct DfreeBound {
    double value = 0.0;
    int dfree = 0;
    bool complete = true;
    std::map<int, std::uint64_t> spectrum;
};
DfreeBound dfree_bound(double ebno_db, const ConvCodeSpec& spec, const Codebook& book, int depth = 10);

}  // namespace ptc
