#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qshape {

// Counter-based generator: a fixed odd stride walks the 64-bit state space
// and a finalizer mixes each counter value into an output word. State is a
// single integer, so seeding is cheap and streams with different seeds are
// decorrelated by the mixing function rather than by warm-up.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in (0, 1]; never returns 0, so it is safe under log().
    double next_unit() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    // One standard normal draw: Box-Muller, cosine branch only, so every
    // draw consumes exactly two uniforms and the stream position stays a
    // pure function of the draw count.
    double next_gaussian() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

// Seed for substream `index` of a master seed. Each trial of an ensemble
// draws from its own substream, which makes results independent of how
// trials are scheduled across threads.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    g.next();
    return g.next();
}

} // namespace qshape
