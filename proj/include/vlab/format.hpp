#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace vlab {

// All real-valued output uses 12 significant digits so that reruns can be
// compared byte for byte.
inline std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

// The double closest to the 12-digit printed form; used before handing
// values to the JSON writer so both outputs agree.
inline double round_to_output(double value) {
    return std::strtod(format_real(value).c_str(), nullptr);
}

}  // namespace vlab
