#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "narrow/formula.hpp"

namespace narrow {

// 64-bit FNV-1a. Stable across platforms, unlike std::hash; only used to
// detect stale files, not for security.
class Fnv1a {
 public:
  Fnv1a& add(std::string_view s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

inline std::string to_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Content hash of an instance: vocabulary names plus the valuation.
inline std::uint64_t instance_hash(const Instance& i) {
  Fnv1a h;
  for (std::size_t v = 0; v < i.vocabulary().size(); ++v) {
    h.add(i.vocabulary()[v].name());
    h.add(i.value(v) ? "=1;" : "=0;");
  }
  return h.value();
}

}  // namespace narrow
