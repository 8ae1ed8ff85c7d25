#pragma once

namespace vrestore {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vrestore
