#include "sawqed/zeropoint.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "sawqed/constants.hpp"

namespace sawqed {

void ModeGeometry::validate() const {
  if (!(A > 0)) throw std::invalid_argument("mode geometry: A must be > 0");
  if (!(k > 0)) throw std::invalid_argument("mode geometry: k must be > 0");
  if (L_trans && L_c && std::abs(*L_trans * *L_c - A) > 1e-12 * A)
    throw std::invalid_argument("mode geometry: A must equal L_trans * L_c");
}

double resolve_velocity(const MaterialRecord& m) {
  if (m.shear_velocity) return *m.shear_velocity;
  if (m.has_elastic()) return solve_110(m).v_s;
  throw std::invalid_argument("material '" + m.name +
                              "' has neither elastic constants nor a catalog velocity");
}

double u0_simple(const MaterialRecord& m, const ModeGeometry& g) {
  g.validate();
  const double v = resolve_velocity(m);
  return std::sqrt(constants::hbar / (2.0 * m.density * v * g.A));
}

namespace {

// adaptive Simpson quadrature
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole,
                          std::max(std::abs(whole), 1.0) * rel_tol, 48);
}

}  // namespace

std::pair<double, double> u0_normalized(const MaterialRecord& m, const ModeGeometry& g,
                                        const RayleighSolution& sol) {
  const double alpha = sol.q.real();
  const double beta = sol.q.imag();
  const double gabs = std::abs(sol.gamma);
  const double theta = -std::arg(sol.gamma);  // gamma = |gamma| exp(-i theta)
  const double phi = sol.phi;
  // depth profiles of the standing-wave mode, in units of kz
  auto chi0 = [&](double s) { return 2.0 * std::exp(-alpha * s) * std::cos(beta * s + phi); };
  auto zeta0 = [&](double s) {
    return 2.0 * gabs * std::exp(-alpha * s) * std::cos(beta * s + phi + theta);
  };
  auto integrand = [&](double s) {
    const double c = chi0(s), z = zeta0(s);
    // transverse average of the cos^2/sin^2 standing-wave factors is 1/2
    return 0.5 * (c * c + z * z);
  };
  const double I = integrate(integrand, 0.0, 40.0, 1e-9);
  const double delta = alpha * I;
  const double u0 = std::sqrt(alpha / delta) * u0_simple(m, g);
  return {u0, delta};
}

double u0_energy_density(const ModeGeometry& g, double H, double v_s) {
  g.validate();
  if (!(H > 0)) throw std::invalid_argument("u0_energy_density: H must be > 0");
  return std::sqrt(constants::hbar * v_s / (H * g.A));
}

ZeroPointSet zero_point_set(const MaterialRecord& m, const ModeGeometry& g) {
  g.validate();
  ZeroPointSet z;
  z.material_name = m.name;
  z.method = ZeroPointMethod::simple;
  z.conservative = m.shear_velocity.has_value() && m.h15.has_value();
  z.U0 = u0_simple(m, g);
  z.s0 = g.k * z.U0;
  if (m.e14 && *m.e14 > 0 && m.eps_rel) {
    const double emin = m.e_min.value_or(*m.e14);
    const double emax = m.e_max.value_or(*m.e14);
    const double lo = emin / (m.eps_rel->second * constants::eps0) * z.U0;
    const double hi = emax / (m.eps_rel->first * constants::eps0) * z.U0;
    z.phi0 = {lo, hi};
    z.xi0 = {g.k * lo, g.k * hi};
  }
  if (m.h15) z.B0 = *m.h15 * z.s0;
  return z;
}

std::string zero_point_table_csv(const std::vector<MaterialRecord>& catalog,
                                 const ModeGeometry& g) {
  std::ostringstream out;
  out << "material,U0_fm,s0_1e9,phi0_min_uV,phi0_max_uV,xi0_min_V_m,xi0_max_V_m,B0_uT,conservative\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  for (const auto& m : catalog) {
    ZeroPointSet z;
    try {
      z = zero_point_set(m, g);
    } catch (const std::exception&) {
      continue;  // records without any usable velocity are skipped
    }
    out << m.name << ',' << num(z.U0 * 1e15) << ',' << num(z.s0 * 1e9) << ',';
    if (z.phi0)
      out << num(z.phi0->first * 1e6) << ',' << num(z.phi0->second * 1e6) << ','
          << num(z.xi0->first) << ',' << num(z.xi0->second) << ',';
    else
      out << ",,,,";
    if (z.B0)
      out << num(*z.B0 * 1e6);
    out << ',' << (z.conservative ? "yes" : "no") << '\n';
  }
  return out.str();
}

}  // namespace sawqed
