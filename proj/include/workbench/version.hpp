#pragma once

namespace workbench {

inline constexpr const char* kVersion = "0.1.0";

} // namespace workbench
