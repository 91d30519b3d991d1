#pragma once

#include <iostream>
#include <string_view>

namespace lame {

/// Process-wide warning sink (stderr). Tests silence it.
inline bool& warnings_enabled() {
  static bool on = true;
  return on;
}

inline void warn(std::string_view message) {
  if (warnings_enabled()) std::clog << "warning: " << message << '\n';
}

}  // namespace lame
