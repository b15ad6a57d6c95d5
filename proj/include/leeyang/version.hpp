#pragma once

namespace leeyang {

inline constexpr const char* kEngineVersion = "0.1.0";

}  // namespace leeyang
