#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace triform {

/// All primes <= limit, by a plain sieve of Eratosthenes.
std::vector<uint32_t> small_primes(uint32_t limit);

/// Calls f(p) for every prime p in [lo, hi], ascending. `base` must contain
/// all primes <= sqrt(hi). Sieves odd candidates only; 2 is reported when in
/// range.
template <typename F>
void for_primes_in(uint64_t lo, uint64_t hi, std::span<const uint32_t> base, F&& f) {
    if (hi < 2 || hi < lo) return;
    if (lo <= 2) {
        f(uint64_t(2));
        lo = 3;
    }
    if (lo % 2 == 0) ++lo;
    if (lo > hi) return;

    // one byte per odd number in [lo, hi]
    const size_t slots = size_t((hi - lo) / 2) + 1;
    std::vector<uint8_t> composite(slots, 0);

    for (uint32_t p : base) {
        if (p == 2) continue;
        const uint64_t p2 = uint64_t(p) * p;
        if (p2 > hi) break;
        uint64_t first = p2;
        if (first < lo) {
            uint64_t m = (lo + p - 1) / p;
            if (m % 2 == 0) ++m;
            first = m * p;
        }
        for (uint64_t c = first; c <= hi; c += 2 * uint64_t(p))
            composite[size_t((c - lo) / 2)] = 1;
    }
    for (size_t i = 0; i < slots; ++i)
        if (!composite[i]) f(lo + 2 * uint64_t(i));
}

} // namespace triform
