#include "logrank/util.hpp"

#include <cstdlib>
#include <string>

namespace logrank {

int cap_from_env(const char* name, int fallback) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return fallback;
    try {
        return std::stoi(v);
    } catch (...) {
        return fallback;
    }
}

}  // namespace logrank
