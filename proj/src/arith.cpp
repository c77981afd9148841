#include "triform/arith.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "triform/errors.hpp"

namespace triform {

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

namespace {

// Strong probable prime test to base a; n odd, n > 2, n - 1 = 2^s * d.
bool sprp(uint64_t n, uint64_t d, int s, uint64_t a) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

bool is_prime(uint64_t n) {
    if (n > (uint64_t(1) << 63))
        throw std::out_of_range("is_prime: input exceeds 2^63");
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
        if (n % p == 0) return n == p;
    }
    if (n < 121) return true;

    const int s = std::countr_zero(n - 1);
    const uint64_t d = (n - 1) >> s;

    // Smallest composites missed by the prefix bases 2, 3, 5, 7, ... (OEIS A014233).
    if (!sprp(n, d, s, 2)) return false;
    if (n < 2047) return true;
    if (!sprp(n, d, s, 3)) return false;
    if (n < 1373653) return true;
    if (!sprp(n, d, s, 5)) return false;
    if (n < 25326001) return true;
    if (!sprp(n, d, s, 7)) return false;
    if (n < 3215031751ull) return true;
    if (!sprp(n, d, s, 11)) return false;
    if (n < 2152302898747ull) return true;
    if (!sprp(n, d, s, 13)) return false;
    if (n < 3474749660383ull) return true;
    if (!sprp(n, d, s, 17)) return false;
    if (n < 341550071728321ull) return true;
    if (!sprp(n, d, s, 19)) return false;
    if (!sprp(n, d, s, 23)) return false;
    if (n < 3825123056546413051ull) return true;
    if (!sprp(n, d, s, 29)) return false;
    if (!sprp(n, d, s, 31)) return false;
    return sprp(n, d, s, 37);
}

StrippedFactorization strip_factor(uint64_t n, uint32_t base) {
    if (n < 1) throw std::domain_error("strip_factor: n must be positive");
    if (base != 2 && base != 3) throw std::domain_error("strip_factor: base must be 2 or 3");
    if (base == 2) {
        const int e = std::countr_zero(n);
        return {uint32_t(e), n >> e};
    }
    uint32_t e = 0;
    while (n % 3 == 0) {
        n /= 3;
        ++e;
    }
    return {e, n};
}

std::optional<uint64_t> checked_pow(uint64_t base, uint32_t exp) {
    u128 r = 1;
    for (uint32_t i = 0; i < exp; ++i) {
        r *= base;
        if (r > ~uint64_t(0)) return std::nullopt;
    }
    return uint64_t(r);
}

namespace {

// Integer k-th root via floating seed plus exact correction.
uint64_t iroot(uint64_t n, uint32_t k) {
    uint64_t r = uint64_t(std::llround(std::pow((long double)n, 1.0L / k)));
    if (r < 1) r = 1;
    auto pow_le_n = [&](uint64_t x) {
        u128 p = 1;
        for (uint32_t i = 0; i < k; ++i) {
            p *= x;
            if (p > n) return false;
        }
        return true;
    };
    while (!pow_le_n(r)) --r;
    while (pow_le_n(r + 1)) ++r;
    return r;
}

} // namespace

std::optional<PrimePower> is_prime_power(uint64_t n) {
    if (n < 2) throw std::domain_error("is_prime_power: n must be >= 2");
    // Largest exponent first: the first exact root cannot itself be a perfect
    // power, so n is a prime power exactly when that root is prime.
    for (uint32_t mu = uint32_t(std::bit_width(n)) - 1; mu >= 2; --mu) {
        const uint64_t r = iroot(n, mu);
        if (checked_pow(r, mu) == n) {
            if (is_prime(r)) return PrimePower{r, mu};
            return std::nullopt;
        }
    }
    if (is_prime(n)) return PrimePower{n, 1};
    return std::nullopt;
}

namespace {

// Modular inverse by extended Euclid; m > 1, gcd(a, m) = 1.
u128 invmod_u128(u128 a, u128 m) {
    i128 t = 0, newt = 1;
    i128 r = i128(m), newr = i128(a % m);
    while (newr != 0) {
        i128 q = r / newr;
        i128 tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: not invertible");
    if (t < 0) t += i128(m);
    return u128(t);
}

} // namespace

u128 crt_k(unsigned beta, unsigned gamma) {
    if (beta < 1) throw std::domain_error("crt_k: beta must be >= 1");
    if (gamma < 2) throw std::domain_error("crt_k: gamma must be >= 2");
    // 3^beta must fit a 64-bit word (its square is used in the CRT step) and
    // the combined modulus must fit 128 bits.
    if (beta > 40 || gamma > 126 || beta * 1.585 + gamma > 126)
        throw PrecisionError("crt_k: 3^beta * 2^gamma out of supported range");

    u128 m3 = 1;
    for (unsigned i = 0; i < beta; ++i) m3 *= 3;
    const u128 m2 = u128(1) << gamma;

    // k = 1 + 2^gamma * t with 2^gamma * t = -2 (mod 3^beta).
    const u128 t = (m3 - 2) % m3 * invmod_u128(m2 % m3, m3) % m3;
    return 1 + m2 * t;
}

} // namespace triform
