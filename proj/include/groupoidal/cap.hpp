#pragma once

#include <cstddef>
#include <cstdlib>

namespace groupoidal {

inline constexpr std::size_t kDefaultCap = 2'000'000;

/// Tuple cap for nerves and windows; GROUPOIDAL_CAP overrides the default.
inline std::size_t default_cap() {
  if (const char* env = std::getenv("GROUPOIDAL_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultCap;
}

}  // namespace groupoidal
