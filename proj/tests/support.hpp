#pragma once

#include <string>
#include <vector>

namespace fowin::test_support {

/// Every bit string with min_len <= |w| <= max_len, shortest first.
inline std::vector<std::string> words_up_to(std::size_t max_len, std::size_t min_len = 0) {
    std::vector<std::string> out;
    for (std::size_t len = min_len; len <= max_len; ++len)
        for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
            std::string w(len, '0');
            for (std::size_t i = 0; i < len; ++i)
                if (bits >> (len - 1 - i) & 1) w[i] = '1';
            out.push_back(w);
        }
    return out;
}

}  // namespace fowin::test_support
