#ifndef TVARBIAS_VERSION_HPP
#define TVARBIAS_VERSION_HPP

#include <string_view>

namespace tvarbias {
inline constexpr std::string_view kVersion = "0.1.0";
}

#endif  // TVARBIAS_VERSION_HPP
