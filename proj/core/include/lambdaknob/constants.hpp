#pragma once

namespace lambdaknob::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double speed_of_light = 2.99792458e8;     // m/s
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double boltzmann = 1.380649e-23;          // J/K
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T

inline constexpr double tesla_to_gauss = 1.0e4;

}  // namespace lambdaknob::constants
