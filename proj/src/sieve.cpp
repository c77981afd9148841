#include "triform/sieve.hpp"

namespace triform {

std::vector<uint32_t> small_primes(uint32_t limit) {
    std::vector<uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<uint8_t> composite(size_t(limit) + 1, 0);
    for (uint64_t i = 2; i * i <= limit; ++i)
        if (!composite[i])
            for (uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    for (uint32_t i = 2; i <= limit; ++i)
        if (!composite[i]) primes.push_back(i);
    return primes;
}

} // namespace triform
