#include "triform/family.hpp"

#include <algorithm>
#include <stdexcept>

#include "triform/arith.hpp"
#include "triform/errors.hpp"

namespace triform {

bool validate_key(int64_t alpha, int64_t beta, int64_t gamma) {
    if (alpha <= 0 || beta <= 0 || gamma <= 0)
        throw std::domain_error("validate_key: exponents must be positive");
    return std::min(alpha, gamma) == 1 && std::max(alpha, gamma) >= 2;
}

namespace {

u128 uabs(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw PrecisionError("resultant product: result needs more than 127 bits");
    return r;
}

i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r))
        throw PrecisionError("resultant: result needs more than 127 bits");
    return r;
}

} // namespace

void require_primitive(const LinearForm& f) {
    if (f.a <= 0) throw std::domain_error("linear form: leading coefficient must be positive");
    if (gcd_u128(uabs(f.a), uabs(f.b)) != 1)
        throw std::domain_error("linear form: gcd(a, b) must be 1");
}

LinearSystem forms_for_family(const FamilyKey& key) {
    if (!validate_key(key.alpha, key.beta, key.gamma))
        throw std::domain_error("forms_for_family: family is provably empty");

    u128 pow3 = 1;
    for (uint32_t i = 0; i < key.beta; ++i) pow3 *= 3;

    LinearSystem sys;
    if (key.gamma == 1) {
        const u128 lead = (u128(1) << key.alpha) * pow3;
        if (lead > (u128(1) << 63))
            throw std::domain_error("forms_for_family: leading coefficient exceeds 2^63");
        sys.forms = {
            {i128(lead), -1},
            {1, 0},
            {i128(lead >> 1), -1},
        };
    } else {
        const u128 lead = pow3 << key.gamma;
        if (lead > (u128(1) << 63))
            throw std::domain_error("forms_for_family: leading coefficient exceeds 2^63");
        const u128 k = crt_k(key.beta, key.gamma);
        sys.forms = {
            {i128(lead), i128(k)},
            {i128(u128(1) << (key.gamma - 1)), i128((k + 1) / (2 * pow3))},
            {i128(pow3), i128((k - 1) >> key.gamma)},
        };
    }
    for (const auto& f : sys.forms) require_primitive(f);
    return sys;
}

i128 resultant(const LinearForm& f, const LinearForm& g) {
    return checked_sub(checked_mul(f.a, g.b), checked_mul(g.a, f.b));
}

i128 e_product(const LinearSystem& system) {
    i128 e = 1;
    for (const auto& f : system.forms) e = checked_mul(e, f.a);
    for (size_t r = 0; r < system.forms.size(); ++r)
        for (size_t s = r + 1; s < system.forms.size(); ++s)
            e = checked_mul(e, resultant(system.forms[r], system.forms[s]));
    return e;
}

i128 resultant_product(const LinearSystem& system) {
    if (system.forms.size() != 4)
        throw std::domain_error("resultant_product: system must have exactly 4 forms");
    i128 t = 1;
    for (size_t g = 0; g < 4; ++g)
        for (size_t h = g + 1; h < 4; ++h)
            t = checked_mul(t, resultant(system.forms[g], system.forms[h]));
    return t;
}

} // namespace triform
