#pragma once

#define OCD_VERSION_STRING "0.1.0"

namespace ocd {

inline constexpr const char* version() { return OCD_VERSION_STRING; }

}  // namespace ocd
