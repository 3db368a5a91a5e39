#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace shardlab {

// splitmix64 finalizer, used for seed derivation and doc_key hashing.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

// Unbiased draw from [0, bound) (Lemire's multiply-shift with rejection).
// Spelled out rather than using std::uniform_int_distribution so seeded
// output does not depend on the standard library implementation.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound)
{
    using u128 = unsigned __int128;
    u128 product = u128(rng()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        std::uint64_t threshold = -bound % bound;
        while (low < threshold) {
            product = u128(rng()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

// Uniform double in [0, 1) with 53 random bits.
inline double unit_real(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng)
{
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = uniform_below(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace shardlab
