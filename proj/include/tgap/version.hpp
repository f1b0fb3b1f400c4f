#pragma once

namespace tgap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tgap
