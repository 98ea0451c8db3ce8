#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace epinet {

/// Engine used throughout. Only its raw 64-bit output is consumed, never the
/// standard library distributions, so streams are identical across toolchains.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of stream `index` under `base`. Counter-based: replica r of an
/// ensemble is reproducible on its own as Rng(derive_seed(base, r)).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng &rng) noexcept;

/// Uniform integer in [0, n). n must be positive.
std::uint64_t uniform_index(Rng &rng, std::uint64_t n) noexcept;

/// k distinct values from [0, n), in draw order (partial Fisher-Yates).
/// Throws DomainError when k > n.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng &rng);

template <typename T>
void shuffle(std::vector<T> &items, Rng &rng)
{
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace epinet
