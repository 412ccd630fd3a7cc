#pragma once

namespace maxvolkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace maxvolkit
