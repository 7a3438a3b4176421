#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>

namespace fowin {

/// Winning-strategy and proof-tree counts. Unbounded, never wraps.
using Count = boost::multiprecision::cpp_int;

inline std::string to_decimal(const Count& c) { return c.str(); }

inline Count pow(const Count& base, std::size_t exponent) {
    return boost::multiprecision::pow(base, static_cast<unsigned>(exponent));
}

/// Number of bits needed to write `c` in binary; 0 for c = 0.
inline std::size_t bit_length(const Count& c) {
    if (c == 0) return 0;
    return static_cast<std::size_t>(boost::multiprecision::msb(c)) + 1;
}

inline bool test_bit(const Count& c, std::size_t i) {
    return boost::multiprecision::bit_test(c, static_cast<unsigned>(i));
}

}  // namespace fowin
