#include "triform/singular.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "triform/arith.hpp"
#include "triform/errors.hpp"
#include "triform/sieve.hpp"

namespace triform {

namespace {

uint64_t reduce_mod(i128 v, uint64_t m) {
    i128 r = v % i128(m);
    if (r < 0) r += i128(m);
    return uint64_t(r);
}

u128 uabs(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

// Fixed block width; the reduction order must not depend on thread count.
constexpr uint64_t kBlock = uint64_t(1) << 24;

// (1 - rho/l)(1 - 1/l)^-R - 1 as an exact integer ratio N / D.
long double log_factor(uint64_t ell, unsigned rho, unsigned R) {
    i128 lpow = 1;
    for (unsigned i = 0; i + 1 < R; ++i) lpow *= i128(ell);
    const i128 n_left = i128(ell - rho) * lpow;
    i128 dpow = 1;
    for (unsigned i = 0; i < R; ++i) dpow *= i128(ell - 1);
    const i128 num = n_left - dpow;
    return std::log1p((long double)num / (long double)dpow);
}

struct BlockSum {
    long double sum = 0.0L;
    bool zero = false;                 // some factor vanished (rho = ell)
    std::vector<uint64_t> bad_primes;  // primes dividing E found in this block
};

} // namespace

uint64_t count_roots(const LinearSystem& system, uint64_t ell) {
    std::vector<uint64_t> roots;
    roots.reserve(system.size());
    for (const auto& f : system.forms) {
        const uint64_t am = reduce_mod(f.a, ell);
        const uint64_t bm = reduce_mod(f.b, ell);
        if (am == 0) {
            if (bm == 0) return ell; // form vanishes identically mod ell
            continue;                // ell | a but not b: no root
        }
        // root of a n + b: n = -b * a^(-1)
        const uint64_t inv = powmod(am, ell - 2, ell);
        const uint64_t root = mulmod((ell - bm) % ell, inv, ell);
        if (std::find(roots.begin(), roots.end(), root) == roots.end())
            roots.push_back(root);
        if (roots.size() >= ell) break;
    }
    return std::min<uint64_t>(roots.size(), ell);
}

SingularSeriesResult singular_series(const LinearSystem& system, uint64_t prime_limit,
                                     unsigned threads) {
    const unsigned R = unsigned(system.size());
    if (R == 0) throw std::domain_error("singular_series: empty system");
    if (prime_limit < 5) throw std::domain_error("singular_series: prime_limit must be >= 5");
    for (const auto& f : system.forms) require_primitive(f);
    // N and D must stay below 2^126.
    if ((R + 1) * std::bit_width(prime_limit) > 126)
        throw PrecisionError("singular_series: prime_limit too large for this many forms");

    bool e_known = true;
    u128 e_abs = 0;
    try {
        const i128 e = e_product(system);
        if (e == 0)
            throw std::domain_error("singular_series: proportional forms, product diverges");
        e_abs = uabs(e);
    } catch (const PrecisionError&) {
        e_known = false; // fall back to exact root counts at every prime
    }

    const uint64_t nblocks = prime_limit / kBlock + 1;
    std::vector<BlockSum> blocks(nblocks);
    const std::vector<uint32_t> base =
        small_primes(uint32_t(std::sqrt((double)prime_limit)) + 2);

    std::atomic<uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const uint64_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            const uint64_t lo = std::max<uint64_t>(2, b * kBlock);
            const uint64_t hi = std::min(prime_limit, (b + 1) * kBlock - 1);
            if (lo > hi) continue;
            BlockSum& out = blocks[b];
            for_primes_in(lo, hi, base, [&](uint64_t ell) {
                uint64_t rho;
                if (e_known && e_abs % ell != 0) {
                    rho = R;
                } else {
                    rho = count_roots(system, ell);
                    out.bad_primes.push_back(ell);
                }
                if (rho >= ell) {
                    out.zero = true;
                    return;
                }
                out.sum += log_factor(ell, unsigned(rho), R);
            });
        }
    };

    const unsigned nthreads = std::max(1u, threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    bool zero = false;
    long double total = 0.0L;
    for (uint64_t b = nblocks; b-- > 0;) { // smallest primes last
        zero = zero || blocks[b].zero;
        total += blocks[b].sum;
    }
    if (zero) return {0.0L, prime_limit, 0.0L};

    // Tail: |log factor| <= (R+1)/l^2 once l is past every divisor of E, so the
    // remainder is below (R+1)/P. Divisors of E beyond P each contribute at
    // most 2R/P more; bound their number by the bit length of what is left of
    // E after stripping the divisors found during the scan.
    long double tail = (long double)(R + 1) / (long double)prime_limit;
    u128 e_rem = e_abs;
    if (e_known) {
        for (const auto& blk : blocks)
            for (uint64_t ell : blk.bad_primes)
                while (e_rem % ell == 0) e_rem /= ell;
    }
    uint64_t large_bad = 0;
    if (!e_known) {
        large_bad = (63 * R + 127 * R * (R - 1) / 2) / std::bit_width(prime_limit);
    } else if (e_rem > 1) {
        unsigned bits = 0;
        while (e_rem > 1) { e_rem >>= 1; ++bits; }
        large_bad = bits / (std::bit_width(prime_limit) - 1) + 1;
    }
    tail += (long double)large_bad * 2.0L * R / (long double)prime_limit;

    return {std::exp(total), prime_limit, tail};
}

SingularSeriesResult s_a_constant(uint64_t prime_limit, unsigned threads) {
    if (prime_limit < 5) throw std::domain_error("s_a_constant: prime_limit must be >= 5");

    const uint64_t nblocks = prime_limit / kBlock + 1;
    std::vector<long double> sums(nblocks, 0.0L);
    const std::vector<uint32_t> base =
        small_primes(uint32_t(std::sqrt((double)prime_limit)) + 2);

    std::atomic<uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const uint64_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            const uint64_t lo = std::max<uint64_t>(5, b * kBlock);
            const uint64_t hi = std::min(prime_limit, (b + 1) * kBlock - 1);
            if (lo > hi) continue;
            long double sum = 0.0L;
            for_primes_in(lo, hi, base, [&](uint64_t ell) {
                // (1 - 3/l)(1 - 1/l)^-3 - 1 = (1 - 3l) / (l - 1)^3
                const i128 num = i128(1) - i128(3) * i128(ell);
                const i128 den = i128(ell - 1) * i128(ell - 1) * i128(ell - 1);
                sum += std::log1p((long double)num / (long double)den);
            });
            sums[b] = sum;
        }
    };

    const unsigned nthreads = std::max(1u, threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    long double total = 0.0L;
    for (uint64_t b = nblocks; b-- > 0;) total += sums[b];
    total += std::log(9.0L);

    return {std::exp(total), prime_limit, 4.0L / (long double)prime_limit};
}

long double hr_upper_bound(const LinearSystem& system, long double x, uint64_t prime_limit,
                           unsigned threads) {
    if (x < 3.0L) throw std::domain_error("hr_upper_bound: x must be >= 3");
    if (e_product(system) == 0)
        throw std::domain_error("hr_upper_bound: E = 0, bound hypothesis violated");
    const unsigned R = unsigned(system.size());
    const auto series = singular_series(system, prime_limit, threads);
    long double factor = 1.0L;
    for (unsigned i = 1; i <= R; ++i) factor *= 2.0L * i; // 2^R * R!
    return factor * series.value * x / std::pow(std::log(x), (long double)R);
}

} // namespace triform
