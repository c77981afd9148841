#pragma once

#include <cstdint>
#include <string>

namespace triform {

using u128 = unsigned __int128;
using i128 = __int128;

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    char buf[48];
    char* p = buf + sizeof(buf);
    while (v != 0) {
        *--p = char('0' + unsigned(v % 10));
        v /= 10;
    }
    return std::string(p, buf + sizeof(buf));
}

inline std::string to_string(i128 v) {
    if (v < 0) return "-" + to_string(u128(0) - u128(v));
    return to_string(u128(v));
}

} // namespace triform
