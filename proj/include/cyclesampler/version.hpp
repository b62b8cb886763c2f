#pragma once

namespace cyclesampler {

inline constexpr const char* version_string = "1.0.0";

}  // namespace cyclesampler
