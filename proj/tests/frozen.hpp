#pragma once

// Reference values produced by the oracles in oracles.hpp (see
// test_oracles.cpp, which recomputes them), frozen here so library tests do
// not pay for the brute-force sums.
namespace frozen {

inline constexpr double kZeta2 = 1.6449340668482264;         // Li_2(1)
inline constexpr double kLi2MinusOne = -0.8224670334241132;  // Li_2(-1)
inline constexpr double kLi2Half = 0.58224052646501245;      // Li_2(1/2)
inline constexpr double kCatalan = 0.91596559417721901;      // D(i)
inline constexpr double kDMax = 1.014941606409651;           // D(e^{i pi/3})
inline constexpr double kLi3Half = 0.53721319360804021;      // Li_3(1/2)

}  // namespace frozen
