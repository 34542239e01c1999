#pragma once

namespace lambdaknob {

inline constexpr const char* version = "0.1.0";

}  // namespace lambdaknob
