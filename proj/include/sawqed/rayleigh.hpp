#ifndef SAWQED_RAYLEIGH_HPP
#define SAWQED_RAYLEIGH_HPP

#include <array>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "sawqed/materials.hpp"

namespace sawqed {

using cplx = std::complex<double>;

/// Roots of a real-coefficient polynomial c[0] + c[1] x + ... + c[n] x^n,
/// computed as companion-matrix eigenvalues and polished with Newton steps.
std::vector<cplx> poly_roots(std::span<const double> coeffs);

/// Surface mode for propagation along [110] of a (001) cubic crystal.
struct RayleighSolution {
  double v_s = 0;    // phase velocity [m/s]
  double X = 0;      // rho v^2 / c11
  cplx q;            // decay root, Re q > 0, Im q >= 0
  cplx gamma;        // amplitude ratio iW/U'
  double phi = 0;    // boundary phase [rad], taken in [0, pi)
  std::string material_name;
};

/// All real roots of the [110] phase-velocity cubic, as velocities
/// in ascending order. The lowest branch is the Rayleigh mode.
std::vector<double> velocity_branches_110(const MaterialRecord& m);

RayleighSolution solve_110(const MaterialRecord& m);

/// Residual diagnostics used by the test suite.
double velocity_cubic_residual(const MaterialRecord& m, double X);
double secular_residual_110(const MaterialRecord& m, double X, cplx q);
double boundary_det_110(const MaterialRecord& m, const RayleighSolution& s);

/// Two-term exponential-cosine displacement profile, normalized to U = 1.
/// Returns (u_x', u_z) at depth kz, in-plane phase chi = kx - t_phase.
std::pair<double, double> displacement_110(const RayleighSolution& s, double kz,
                                           double kx, double t_phase);

/// Perturbative piezoelectric potential accompanying the [110] mode.
struct PiezoFieldProfile {
  cplx A1;
  double A3 = 0;
  double alpha = 0, beta = 0;  // q = alpha + i beta
  double xi = 0;               // phase of A1 = |A1| exp(-i xi)
  double phi = 0;              // boundary phase of the elastic solution
  double k = 0;                // wavenumber [1/m]
  double phi0_scale = 0;       // (e14/eps) * U  [V] for U = 1 m

  /// Dimensionless envelope inside the solid (kz >= 0).
  double F(double kz) const;
  /// Vacuum side: F(0) * exp(kz) for kz <= 0.
  double vacuum_side(double kz) const;
};

PiezoFieldProfile piezo_profile(const MaterialRecord& m, const RayleighSolution& s,
                                double k);

/// exp(-k d): decay of the surface potential into the vacuum above.
double vacuum_decay(double k, double d);

/// General propagation direction theta (angle from the x-axis, in-plane).
struct GeneralModeSolution {
  double theta = 0;
  double c = 0;  // phase velocity [m/s]
  std::vector<cplx> roots;  // kept decay roots, Re q > 0
  std::vector<std::array<cplx, 3>> amplitude_vectors;  // (xi, eta, zeta) per root
  std::array<cplx, 3> K{};  // mirror-axis weights (boundary null vector)
  double detB_min = 0;      // column-normalized |det B| at the solution
};

/// Scans c over the window (2000-point grid + golden-section refinement)
/// for the minimum of the column-normalized |det B|. Throws if no minimum
/// falls below tolerance.
GeneralModeSolution solve_general(const MaterialRecord& m, double theta,
                                  std::pair<double, double> c_window);

/// Default scan window [0.5, 1.0] * sqrt(c44/rho).
std::pair<double, double> default_c_window(const MaterialRecord& m);

}  // namespace sawqed

#endif
