#pragma once

namespace qg2l {

inline constexpr const char* version = "0.1.0";

}  // namespace qg2l
