#pragma once

#include <string_view>

namespace hetanova {

inline constexpr std::string_view kProgramName = "hetanova";
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace hetanova
