#pragma once

namespace occflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace occflow
