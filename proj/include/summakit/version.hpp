#pragma once

namespace summakit {

inline constexpr const char* version = "1.0.0";

} // namespace summakit
