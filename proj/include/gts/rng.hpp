#ifndef GTS_RNG_HPP
#define GTS_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace gts {

/// Seeded random stream with a platform-independent mapping to doubles.
///
/// std::uniform_real_distribution is implementation-defined, so draws are built directly from
/// the 64-bit engine output; equal seeds give equal sequences with any standard library.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t draws() const { return draws_; }

    std::uint64_t next_u64()
    {
        ++draws_;
        return engine_();
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n); n must be positive.
    std::size_t index(std::size_t n)
    {
        const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

private:
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// 64-bit FNV-1a of a byte string.
constexpr std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Stable seed for a tuple of labelled parts: order-sensitive and independent of platform.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> parts)
{
    std::uint64_t h = mix64(master);
    for (auto part : parts) {
        h = mix64(h ^ fnv1a(part));
    }
    return h;
}

} // namespace gts

#endif
