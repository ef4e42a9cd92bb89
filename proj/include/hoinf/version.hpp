#pragma once

#ifndef HOINF_VERSION
#define HOINF_VERSION "0.1.0"
#endif

namespace hoinf {

inline constexpr const char* kVersion = HOINF_VERSION;

}  // namespace hoinf
