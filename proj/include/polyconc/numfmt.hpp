#pragma once

#include <cstdio>
#include <string>

namespace polyconc {

// 17 significant digits: enough to round-trip any double.
inline std::string format_sig17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace polyconc
