#pragma once

#include <cstdint>

#include "triform/family.hpp"

namespace triform {

/// Truncated Euler product with a certified relative tail bound: the full
/// product lies in [value*(1 - tail_bound), value*(1 + tail_bound)].
struct SingularSeriesResult {
    long double value;
    uint64_t prime_limit;
    long double tail_bound;
};

/// Number of n in [0, ell) with prod_i (a_i n + b_i) = 0 (mod ell); ell prime.
uint64_t count_roots(const LinearSystem& system, uint64_t ell);

/// prod_{ell <= prime_limit} (1 - rho(ell)/ell) (1 - 1/ell)^-R, accumulated as
/// log factors in fixed blocks (reduced largest block first) so the result is
/// identical for any thread count. Returns exact 0 when rho(ell) = ell.
SingularSeriesResult singular_series(const LinearSystem& system, uint64_t prime_limit,
                                     unsigned threads = 1);

/// Closed-form evaluator for the three-form family constant:
/// 9 * prod_{5 <= p <= prime_limit} (1 - 3/p)(1 - 1/p)^-3.
SingularSeriesResult s_a_constant(uint64_t prime_limit, unsigned threads = 1);

/// Sieve upper-bound main term 2^R R! S x / (log x)^R for the system.
/// Requires e_product(system) != 0 and x >= 3.
long double hr_upper_bound(const LinearSystem& system, long double x, uint64_t prime_limit,
                           unsigned threads = 1);

} // namespace triform
