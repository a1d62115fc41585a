#pragma once

namespace paneldiag {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace paneldiag
