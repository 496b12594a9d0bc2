#ifndef TVARBIAS_RNG_HPP
#define TVARBIAS_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace tvarbias {

/// Identifier recorded in experiment metadata. Streams are std::mt19937_64
/// engines whose seed is the SplitMix64 mix of (root seed, stream index).
inline constexpr std::string_view kGeneratorId = "mt19937_64/splitmix64-stream-v1";

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for an independent child stream. Deterministic in both arguments.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept;

/// Seeded generator. Uniforms are built from raw engine bits so the output is
/// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Child generator for stream `index`; does not advance this generator.
    static Rng stream(std::uint64_t root, std::uint64_t index) {
        return Rng(derive_seed(root, index));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform on the open interval (0, 1), 52-bit resolution.
    double uniform_open() {
        return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
    }

    /// Uniform integer in [0, bound), bound > 0.
    std::size_t index_below(std::size_t bound) {
        // Lemire's multiply-shift with rejection of the biased low range.
        const std::uint64_t range = bound;
        std::uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * range;
        auto low = static_cast<std::uint64_t>(m);
        if (low < range) {
            const std::uint64_t threshold = -range % range;
            while (low < threshold) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * range;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace tvarbias

#endif  // TVARBIAS_RNG_HPP
