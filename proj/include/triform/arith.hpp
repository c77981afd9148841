#pragma once

#include <cstdint>
#include <optional>

#include "triform/int128.hpp"

namespace triform {

/// n = base^exponent * cofactor with base not dividing cofactor.
struct StrippedFactorization {
    uint32_t exponent;
    uint64_t cofactor;
};

/// q^mu with q prime, mu >= 1.
struct PrimePower {
    uint64_t base;
    uint32_t exponent;
};

/// Deterministic primality test for n <= 2^63 (fixed witness bases, no
/// probabilistic error). Throws std::out_of_range above 2^63.
bool is_prime(uint64_t n);

/// Extracts the full power of `base` (2 or 3) from n >= 1.
StrippedFactorization strip_factor(uint64_t n, uint32_t base);

/// Returns (q, mu) with n = q^mu, q prime, if n >= 2 is a prime power;
/// empty otherwise. Primes map to (n, 1). Throws std::domain_error for n < 2.
std::optional<PrimePower> is_prime_power(uint64_t n);

/// The unique k with k = -1 (mod 3^beta), k = 1 (mod 2^gamma) and
/// 0 < k < 3^beta * 2^gamma. Requires beta >= 1, gamma >= 2.
u128 crt_k(unsigned beta, unsigned gamma);

/// (a * b) mod m without overflow.
inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t((u128(a) * b) % m);
}

/// (a ^ e) mod m.
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);

/// base^exp, or empty on 64-bit overflow.
std::optional<uint64_t> checked_pow(uint64_t base, uint32_t exp);

} // namespace triform
