#pragma once

namespace taxokit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace taxokit
