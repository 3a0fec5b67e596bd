#pragma once

namespace photonbox {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace photonbox
