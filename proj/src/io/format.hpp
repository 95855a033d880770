#pragma once

#include <charconv>
#include <string>

namespace ias::io {

// Shortest round-trip decimal representation; locale-independent, byte-stable
// across runs.
inline std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace ias::io
