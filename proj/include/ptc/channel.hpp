#pragma once

#include <optional>

#include "ptc/common.hpp"
#include "ptc/modem.hpp"
#include "ptc/rng.hpp"

namespace ptc {

/// Narrowband interferer: one frequency row disturbed for a stretch of time
/// slots. Applied to the first `slots` columns of each transmitted matrix as a
/// random-phase tone of power Es * 10^(power_db/10).
struct NbiParams {
    int row = 1;  // 1-based frequency index
    int slots = 0;
    double power_db = 0.0;
};

struct ChannelParams {
    double esn0_db = 10.0;
    /// Impulsive index A = N0/Ni; impulse noise power Ni = N0/A.
    double impulsive_index = 1.0;
    /// Impulse arrivals per second and mean impulse duration in seconds.
    /// One Bernoulli(gamma * t_noise) draw gates each time slot; a hit puts
    /// the impulse term on all M rows of that slot.
    double gamma = 0.0;
    double t_noise = 0.0;
    std::optional<NbiParams> nbi;

    double hit_probability() const { return gamma * t_noise; }
    double esn0_linear() const;
    void validate() const;  // throws ConfigError
};

/// y_ij = e^{j phi} s_ij + v_G, phi drawn once per column, v_G complex
/// Gaussian with per-component variance N0/2, N0 = Es / (Es/N0).
ReceivedMatrix transmit_awgn(const CodeMatrix& s, const ChannelParams& params, RngStream& rng);

/// AWGN plus Bernoulli-gated impulse noise CN(0, Ni) per slot and the
/// configured narrowband interferer.
ReceivedMatrix transmit_plc(const CodeMatrix& s, const ChannelParams& params, RngStream& rng);

/// Es/N0 = Eb/N0 * R_P * log2(M), in and out in dB.
double ebno_to_esno(double ebno_db, double rate_p, int m);

}  // namespace ptc
