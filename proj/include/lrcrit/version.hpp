#pragma once

namespace lrcrit {

inline constexpr const char* version = "1.0.0";

}
