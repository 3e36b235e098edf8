#ifndef SAWQED_CONSTANTS_HPP
#define SAWQED_CONSTANTS_HPP

namespace sawqed::constants {

// CODATA 2018, SI
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg

// energy conversion: 1 ueV in J, and the equivalent angular frequency
inline constexpr double ueV = 1.602176634e-25;           // J
inline constexpr double ueV_to_rad_s = ueV / hbar;       // rad/s per ueV

}  // namespace sawqed::constants

#endif
