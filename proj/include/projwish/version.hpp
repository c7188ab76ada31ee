#pragma once

namespace projwish {

inline constexpr const char* kVersionString = "projwish 0.1.0";

}  // namespace projwish
