#pragma once

#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include "meso/errors.hpp"

namespace meso {

// Shortest decimal string that parses back to exactly the same double, so
// text outputs are byte-deterministic and reload without drift.
inline std::string to_shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw ExportError("number formatting failed");
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(std::string("bad number in ") + what + ": '" + std::string(s) + "'");
    return v;
}

} // namespace meso
