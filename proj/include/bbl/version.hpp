#pragma once

namespace bbl {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace bbl
