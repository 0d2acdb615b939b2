#pragma once

#ifndef TWKDE_VERSION
#define TWKDE_VERSION "0.0.0"
#endif

namespace twkde {

inline constexpr const char* version = TWKDE_VERSION;

} // namespace twkde
