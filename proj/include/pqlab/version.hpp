#pragma once

#include <string>

namespace pqlab {

inline constexpr const char* version = "0.1.0";

#ifndef PQLAB_GIT_HASH
#define PQLAB_GIT_HASH "unknown"
#endif

inline std::string version_string() {
    return std::string(version) + "+" + PQLAB_GIT_HASH;
}

}  // namespace pqlab
