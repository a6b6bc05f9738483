#pragma once

#include <cstdint>
#include <random>

namespace varent {

/// SplitMix64 finaliser; expands a master seed into independent child seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of stream `index` under `master`. Depends only on the pair, so serial
/// and parallel drivers draw identical replicates.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform variates on the open interval (0, 1) from mt19937_64. The
/// conversion is done by hand so the stream is identical on every standard
/// library.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        const std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        const auto i = static_cast<std::size_t>(next() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace varent
