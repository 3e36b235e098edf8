#ifndef SAWQED_ZEROPOINT_HPP
#define SAWQED_ZEROPOINT_HPP

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sawqed/materials.hpp"
#include "sawqed/rayleigh.hpp"

namespace sawqed {

struct ModeGeometry {
  double A = 1e-12;       // effective mode area [m^2], default 1 um^2
  double k = 2.0 * M_PI / 1e-6;  // wavenumber [1/m], default 2pi/um
  std::optional<double> L_trans, L_c;  // [m]; when both set, A = L_trans * L_c
  void validate() const;
};

enum class ZeroPointMethod { simple, normalized, energy_density, literature };

struct ZeroPointSet {
  std::string material_name;
  double U0 = 0;  // [m]
  double s0 = 0;  // dimensionless strain, k*U0
  std::optional<std::pair<double, double>> phi0;  // [V] (min, max)
  std::optional<std::pair<double, double>> xi0;   // [V/m]
  std::optional<double> B0;                       // [T]
  bool conservative = false;  // velocity from the bulk-shear fallback
  ZeroPointMethod method = ZeroPointMethod::simple;
};

/// Catalog phase velocity: shear_velocity field when present, otherwise
/// the [110] Rayleigh solve.
double resolve_velocity(const MaterialRecord& m);

/// U0 = sqrt(hbar / (2 rho v_s A))
double u0_simple(const MaterialRecord& m, const ModeGeometry& g);

/// Mode-normalized U0 = sqrt(Omega_r/delta) * u0_simple, with delta from
/// the depth integral of the displacement profile. Returns (U0, delta).
std::pair<double, double> u0_normalized(const MaterialRecord& m, const ModeGeometry& g,
                                        const RayleighSolution& sol);

/// U0 = sqrt(hbar v_s / (H A)) from the classical surface energy density
/// E = k U^2 H.
double u0_energy_density(const ModeGeometry& g, double H, double v_s);

ZeroPointSet zero_point_set(const MaterialRecord& m, const ModeGeometry& g);

/// One row per material, columns (material, U0_fm, s0_1e9, phi0_min_uV,
/// phi0_max_uV, xi0_min_V_m, xi0_max_V_m, B0_uT, conservative).
std::string zero_point_table_csv(const std::vector<MaterialRecord>& catalog,
                                 const ModeGeometry& g);

}  // namespace sawqed

#endif
