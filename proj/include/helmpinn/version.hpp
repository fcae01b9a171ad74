#pragma once

namespace helmpinn {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "helmpinn";

} // namespace helmpinn
