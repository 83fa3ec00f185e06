#pragma once

namespace hypan {
inline constexpr const char* version_string = "0.1.0";
}
