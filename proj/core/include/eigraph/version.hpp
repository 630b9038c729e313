#pragma once

namespace eigraph {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace eigraph
