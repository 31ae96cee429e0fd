// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ssfr {

/// splitmix64 finalizer; good avalanche for seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives an independent stream seed for one consumer of the master seed.
/// Keyed by (consumer tag, index) so adding a consumer never perturbs the
/// draws seen by existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view consumer,
                                    std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ fnv1a64(consumer)) + index);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::string_view consumer,
                                   std::uint64_t index = 0) {
    return std::mt19937_64(derive_seed(master, consumer, index));
}

}  // namespace ssfr
