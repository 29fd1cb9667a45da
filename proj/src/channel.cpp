#include "ptc/channel.hpp"

#include <cmath>

namespace ptc {

double ChannelParams::esn0_linear() const {
    return std::pow(10.0, esn0_db / 10.0);
}

void ChannelParams::validate() const {
    if (!(impulsive_index > 0.0)) throw ConfigError("impulsive index A must be > 0");
    if (gamma < 0.0 || t_noise < 0.0) throw ConfigError("gamma and t_noise must be >= 0");
    const double p = hit_probability();
    if (p > 1.0) throw ConfigError("per-slot impulse probability gamma*t_noise = " + std::to_string(p) + " exceeds 1");
    if (nbi && (nbi->row < 1 || nbi->slots < 0)) throw ConfigError("bad NBI parameters");
}

namespace {

ReceivedMatrix transmit(const CodeMatrix& s, const ChannelParams& params, RngStream& rng, bool plc) {
    params.validate();
    const int m = s.M();
    const double n0 = s.es / params.esn0_linear();
    const double sigma = std::sqrt(n0 / 2.0);
    const double p_hit = params.hit_probability();
    const double sigma_impulse = std::sqrt(n0 / params.impulsive_index / 2.0);

    ReceivedMatrix y{Square<Complex>(m)};
    for (int j = 0; j < m; ++j) {
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        const Complex rotation = std::polar(1.0, phi);
        for (int i = 0; i < m; ++i) y.cells(i, j) = rotation * s.cells(i, j) + sigma * rng.std_complex_normal();
        if (plc && p_hit > 0.0 && rng.bernoulli(p_hit)) {
            // Impulse hits every frequency of the slot.
            for (int i = 0; i < m; ++i) y.cells(i, j) += sigma_impulse * rng.std_complex_normal();
        }
    }
    if (plc && params.nbi && params.nbi->slots > 0) {
        const NbiParams& nbi = *params.nbi;
        const int row = nbi.row - 1;
        if (row >= m) throw ConfigError("NBI row exceeds M");
        const double amplitude = std::sqrt(s.es * std::pow(10.0, nbi.power_db / 10.0));
        const int slots = std::min(nbi.slots, m);
        for (int j = 0; j < slots; ++j)
            y.cells(row, j) += std::polar(amplitude, rng.uniform(0.0, 2.0 * M_PI));
    }
    return y;
}

}  // namespace

ReceivedMatrix transmit_awgn(const CodeMatrix& s, const ChannelParams& params, RngStream& rng) {
    return transmit(s, params, rng, false);
}

ReceivedMatrix transmit_plc(const CodeMatrix& s, const ChannelParams& params, RngStream& rng) {
    return transmit(s, params, rng, true);
}

double ebno_to_esno(double ebno_db, double rate_p, int m) {
    if (!(rate_p > 0.0) || rate_p > 1.0) throw ConfigError("R_P must be in (0, 1]");
    if (m < 2) throw ConfigError("M must be >= 2");
    const double ebno = std::pow(10.0, ebno_db / 10.0);
    return 10.0 * std::log10(ebno * rate_p * std::log2(static_cast<double>(m)));
}

}  // namespace ptc
