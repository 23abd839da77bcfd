#pragma once

// Natural units throughout (hbar = c = 1): energies in eV, angles in rad,
// lengths enter in Angstrom and are converted with hbar*c.

namespace chanrad {

struct PhysConstants {
  double hbar_c_eV_A = 1973.27;
  double electron_mass_eV = 0.511e6;
  double fine_structure = 1.0 / 137.036;
};

inline constexpr PhysConstants kPhys{};

static_assert(kPhys.hbar_c_eV_A > 0 && kPhys.electron_mass_eV > 0 && kPhys.fine_structure > 0);
static_assert(kPhys.fine_structure < 0.01);

namespace units {
inline constexpr double eV = 1.0;
inline constexpr double keV = 1e3;
inline constexpr double MeV = 1e6;
inline constexpr double GeV = 1e9;
inline constexpr double TeV = 1e12;

inline constexpr double rad = 1.0;
inline constexpr double mrad = 1e-3;
inline constexpr double urad = 1e-6;
inline constexpr double nrad = 1e-9;

inline constexpr double angstrom = 1.0;
inline constexpr double nm = 10.0;
}  // namespace units

}  // namespace chanrad
