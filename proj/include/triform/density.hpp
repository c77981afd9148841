#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace triform {

/// Integral of dt / (log t)^3 from 2 to x, relative error certified <= 1e-9.
long double li3(long double x);

/// (s_a / 2) * x / (log x)^3.
long double main_term(long double x, long double s_a);

/// One comparison row: the count against both density predictors.
struct CountRecord {
    uint64_t x;
    uint64_t count_a;
    long double ratio_log3; // count_a / (x / (log x)^3)
    long double ratio_li3;  // count_a / li3(x)
};

/// Computes both ratio columns for aligned (x, count) pairs, ascending in x.
std::vector<CountRecord> build_table(std::span<const uint64_t> limits,
                                     std::span<const uint64_t> counts);

/// Two decimals, half away from zero (display rounding for the ratio columns).
std::string format_fixed2(long double v);

std::string table_csv(std::span<const CountRecord> records);
std::string table_text(std::span<const CountRecord> records);

} // namespace triform
