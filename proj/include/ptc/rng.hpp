#pragma once

#include <cstdint>
#include <random>

#include "ptc/common.hpp"

namespace ptc {

/// Reproducible random stream. A stream is fully identified by (seed, stream id):
/// the pair is mixed through two rounds of splitmix64 into the seed of a
/// std::mt19937_64, whose output sequence is specified by the standard, so the
/// same (seed, id) yields the same samples on any platform and thread count.
/// Gaussian variates use the Box-Muller transform on the raw 53-bit uniforms
/// rather than std::normal_distribution (whose algorithm is unspecified).
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Child stream derived from (seed, mix(stream id, tag)); independent of
    /// how much of the parent has been consumed.
    RngStream fork(std::uint64_t tag) const;

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Unit-variance-per-component complex Gaussian (both Box-Muller outputs
    /// of one draw, so no hidden cache state).
    Complex std_complex_normal();

    /// Bernoulli with success probability p.
    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

}  // namespace ptc
