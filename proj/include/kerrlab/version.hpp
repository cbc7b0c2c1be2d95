#pragma once

namespace kerrlab {

inline constexpr const char* version = "0.1.0";

}
