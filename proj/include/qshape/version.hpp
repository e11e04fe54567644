#pragma once

#include <string_view>

namespace qshape {

inline constexpr std::string_view kToolName = "qshape";
inline constexpr std::string_view kVersion = "0.1.0";

} // namespace qshape
