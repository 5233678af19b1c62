#pragma once

namespace leofim {

// SI units throughout.
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEarthRadius = 6371e3;  // m, mean spherical

}  // namespace leofim
