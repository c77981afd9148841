#pragma once

#include <cstdint>
#include <vector>

#include "triform/int128.hpp"

namespace triform {

/// Exponent triple selecting one residue family. Non-empty families satisfy
/// beta >= 1, min(alpha, gamma) = 1, max(alpha, gamma) >= 2.
struct FamilyKey {
    uint32_t alpha;
    uint32_t beta;
    uint32_t gamma;

    bool operator==(const FamilyKey&) const = default;
};

/// a*n + b with a > 0 and gcd(a, b) = 1.
struct LinearForm {
    i128 a;
    i128 b;

    bool operator==(const LinearForm&) const = default;
};

struct LinearSystem {
    std::vector<LinearForm> forms;

    size_t size() const { return forms.size(); }
};

/// True iff the triple can support members: beta >= 1, min(alpha, gamma) = 1,
/// max(alpha, gamma) >= 2. Inputs <= 0 are a domain error.
bool validate_key(int64_t alpha, int64_t beta, int64_t gamma);

/// Throws std::domain_error unless a > 0 and gcd(a, b) = 1.
void require_primitive(const LinearForm& f);

/// The three primitive forms (p, q, r) attached to a valid key.
/// gamma = 1:  { 2^a 3^b n - 1,  n,  2^(a-1) 3^b n - 1 }
/// alpha = 1:  { 3^b 2^g n + k,  2^(g-1) n + (k+1)/(2*3^b),  3^b n + (k-1)/2^g }
/// Keys whose leading coefficient exceeds 2^63 are rejected.
LinearSystem forms_for_family(const FamilyKey& key);

/// Resultant of two linear polynomials: a_f * b_g - a_g * b_f.
i128 resultant(const LinearForm& f, const LinearForm& g);

/// Product of all leading coefficients and all pairwise resultants (r < s).
/// Zero iff two forms are proportional. Throws PrecisionError on overflow.
i128 e_product(const LinearSystem& system);

/// Product of the resultants of all 6 unordered pairs of a 4-form system.
i128 resultant_product(const LinearSystem& system);

} // namespace triform
