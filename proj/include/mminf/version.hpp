#pragma once

namespace mminf {

inline constexpr const char* kVersionString = "1.0.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace mminf
