#pragma once

namespace pam {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pam
