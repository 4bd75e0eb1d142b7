#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace dtlab {

/// Counter-based generator: Philox4x32-10 (Salmon et al., SC'11).
///
/// The 64-bit key is the user seed; the two high counter words hold a stream
/// id, so (seed, stream) pairs give independent substreams that can be drawn
/// in any order. All output is a pure function of (seed, stream, draw index),
/// which is what makes trial-parallel experiments bit-reproducible.
class Philox {
public:
    explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(seed), stream_(stream) {}

    /// One keyed 10-round block; exposed for known-answer tests.
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key);

    std::uint64_t next_u64();

    /// Uniform in [0,1), 53 significant bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0,1]; safe as a log() argument.
    double uniform_open01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard real Gaussian via Box-Muller (own implementation so that the
    /// stream is identical across platforms and standard libraries).
    double gaussian();

    /// Complex Gaussian with E|g|^2 = 1 (independent re/im, variance 1/2 each).
    std::complex<double> complex_gaussian();

    std::uint64_t seed() const { return key_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::uint64_t buffer_[2] = {0, 0};
    int buffered_ = 0;
    bool have_spare_gaussian_ = false;
    double spare_gaussian_ = 0.0;
};

} // namespace dtlab
