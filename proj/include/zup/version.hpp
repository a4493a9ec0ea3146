#pragma once

namespace zup {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace zup
