#pragma once

namespace gazemetry {

inline constexpr const char* kToolName = "gazemetry";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace gazemetry
