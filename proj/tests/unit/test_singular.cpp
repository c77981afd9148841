#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "triform/errors.hpp"
#include "triform/family.hpp"
#include "triform/sieve.hpp"
#include "triform/singular.hpp"

using namespace triform;

namespace {

const LinearSystem kFamily112 = forms_for_family({1, 1, 2});

// Oracle: count the roots of the product polynomial by scanning all residues.
uint64_t brute_roots(const LinearSystem& sys, uint64_t ell) {
    uint64_t count = 0;
    for (uint64_t n = 0; n < ell; ++n) {
        u128 prod = 1;
        for (const auto& f : sys.forms) {
            i128 v = (f.a * i128(n) + f.b) % i128(ell);
            if (v < 0) v += ell;
            prod = (prod * u128(v)) % ell;
        }
        if (prod == 0) ++count;
    }
    return count;
}

std::vector<FamilyKey> sample_keys() {
    std::vector<FamilyKey> keys;
    for (uint32_t a = 1; a <= 10; ++a)
        for (uint32_t b = 1; b <= 6; ++b)
            for (uint32_t g = 1; g <= 10; ++g)
                if (validate_key(a, b, g)) keys.push_back({a, b, g});
    return keys;
}

} // namespace

TEST_CASE("count_roots on the first family system") {
    CHECK(count_roots(kFamily112, 2) == 1);
    CHECK(count_roots(kFamily112, 3) == 1);
    CHECK(count_roots(kFamily112, 5) == 3);
    CHECK(count_roots(kFamily112, 7) == 3);
    CHECK(count_roots(LinearSystem{{{1, 0}}}, 7) == 1);
}

TEST_CASE("count_roots matches the residue-scan oracle") {
    std::mt19937_64 rng(1357);
    const auto primes = small_primes(200);
    for (int trial = 0; trial < 100; ++trial) {
        LinearSystem sys;
        const size_t nf = 1 + rng() % 5;
        for (size_t i = 0; i < nf; ++i) {
            int64_t a = int64_t(rng() % 40) + 1;
            int64_t b = int64_t(rng() % 81) - 40;
            // force primitivity
            while (std::gcd(a, b < 0 ? -b : b) != 1) ++b;
            sys.forms.push_back({a, b});
        }
        for (uint32_t ell : primes) {
            const auto got = count_roots(sys, ell);
            CHECK(got == brute_roots(sys, ell));
            CHECK(got <= std::min<uint64_t>(sys.size(), ell));
        }
    }
}

TEST_CASE("rho is (1, 1, 3, 3, ...) for every valid family") {
    const auto primes = small_primes(1000);
    for (const auto& key : sample_keys()) {
        const auto sys = forms_for_family(key);
        for (uint32_t ell : primes) {
            const uint64_t expect = ell <= 3 ? 1 : 3;
            CHECK(count_roots(sys, ell) == expect);
        }
    }
}

TEST_CASE("four-form system has rho = 4 away from its resultant primes") {
    const LinearSystem sys{{{12, 5}, {2, 1}, {3, 1}, {24, 11}}};
    CHECK(resultant_product(sys) == -1296); // = -(2^4 * 3^4)
    for (uint32_t ell : small_primes(100)) {
        if (ell < 5) continue;
        CHECK(count_roots(sys, ell) == 4);
    }
}

TEST_CASE("singular series: frozen truncation values") {
    // independently computed truncated products for the family system
    const auto r5 = singular_series(kFamily112, 100'000);
    CHECK(std::fabs(r5.value - 5.716510949807829280L) < 5e-16L * r5.value);
    CHECK(r5.prime_limit == 100'000);
    CHECK(r5.tail_bound == doctest::Approx(4.0 / 100'000.0).epsilon(1e-12));

    const auto r6 = singular_series(kFamily112, 1'000'000);
    CHECK(std::fabs(r6.value - 5.716498353758806937L) < 5e-16L * r6.value);

    // nested intervals: the refined value stays inside the coarse certificate
    CHECK(std::fabs(r6.value - r5.value) <= r5.value * r5.tail_bound);

    // the infinite product (independently computed) lies inside both certificates
    const long double exact = 5.716497191438440865L;
    CHECK(std::fabs(exact - r5.value) <= r5.value * r5.tail_bound);
    CHECK(std::fabs(exact - r6.value) <= r6.value * r6.tail_bound);
}

TEST_CASE("singular series is bit-identical across families") {
    const auto base = singular_series(kFamily112, 100'000);
    for (const auto& key : std::vector<FamilyKey>{
             {2, 1, 1}, {3, 2, 1}, {1, 2, 4}, {5, 1, 1}, {1, 4, 2}, {4, 3, 1}, {1, 1, 9}}) {
        const auto r = singular_series(forms_for_family(key), 100'000);
        CHECK(r.value == base.value);
        CHECK(r.tail_bound == base.tail_bound);
    }
}

TEST_CASE("singular series is deterministic across thread counts") {
    const auto one = singular_series(kFamily112, 1'000'000, 1);
    const auto four = singular_series(kFamily112, 1'000'000, 4);
    CHECK(one.value == four.value);
}

TEST_CASE("single form 2n+1 gives exactly 2") {
    const LinearSystem sys{{{2, 1}}};
    const auto r = singular_series(sys, 100'000);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("series vanishes when every residue is covered") {
    const LinearSystem sys{{{1, 0}, {1, 1}}}; // rho(2) = 2
    const auto r = singular_series(sys, 100);
    CHECK(r.value == 0.0L);
    CHECK(r.tail_bound == 0.0L);
}

TEST_CASE("proportional forms are rejected") {
    const LinearSystem dup{{{2, 1}, {2, 1}}};
    CHECK_THROWS_AS(singular_series(dup, 1000), std::domain_error);
    CHECK_THROWS_AS(singular_series(kFamily112, 3), std::domain_error);
}

TEST_CASE("closed-form constant evaluator") {
    const auto tiny = s_a_constant(5);
    CHECK(tiny.value == doctest::Approx(7.03125).epsilon(1e-15));

    const auto r = s_a_constant(100'000);
    CHECK(std::fabs(r.value - 5.716510949807829280L) < 5e-16L * r.value);

    // agreement with the generic evaluator within combined tails
    const auto generic = singular_series(kFamily112, 100'000);
    CHECK(std::fabs(r.value - generic.value) <=
          r.value * r.tail_bound + generic.value * generic.tail_bound);
}

TEST_CASE("unconditional density constant 24 * S") {
    const long double exact = 5.716497191438440865L;
    CHECK(24.0L * exact == doctest::Approx(137.19593259).epsilon(1e-9));
    const auto r = s_a_constant(1'000'000);
    CHECK(std::fabs(24.0L * r.value - 137.19593259L) <= 24.0L * r.value * r.tail_bound + 1e-7L);
}

TEST_CASE("sieve upper-bound main term") {
    const uint64_t P = 100'000;
    const auto series = singular_series(kFamily112, P);
    const long double x = 1e6L;
    const long double lg = std::log(x);
    const long double expect = 48.0L * series.value * x / (lg * lg * lg);
    CHECK(hr_upper_bound(kFamily112, x, P) == doctest::Approx((double)expect).epsilon(1e-12));

    const LinearSystem dup{{{2, 1}, {2, 1}}};
    CHECK_THROWS_AS(hr_upper_bound(dup, 1e6L, P), std::domain_error);
    CHECK_THROWS_AS(hr_upper_bound(kFamily112, 2.0L, P), std::domain_error);
}
