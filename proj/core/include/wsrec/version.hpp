#pragma once

namespace wsrec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wsrec
