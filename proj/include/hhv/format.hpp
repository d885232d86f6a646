#pragma once

#include <array>
#include <charconv>
#include <string>

namespace hhv {

// Shortest decimal text that parses back to exactly the same double.
inline std::string format_real(double value) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf.data(), end);
}

}  // namespace hhv
