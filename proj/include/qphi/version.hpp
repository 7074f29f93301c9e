#pragma once

#include <string_view>

namespace qphi {

// Bump when a change can alter any computed coefficient; cached series
// files are keyed by this string and silently ignored on mismatch.
inline constexpr std::string_view kEngineVersion = "qphi/0.1.0";

}  // namespace qphi
