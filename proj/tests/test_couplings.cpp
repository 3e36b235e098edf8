#include <tuple>
#include <utility>

#include <doctest.h>

#include <cmath>

#include "sawqed/constants.hpp"
#include "sawqed/couplings.hpp"
#include "sawqed/rayleigh.hpp"
#include "sawqed/zeropoint.hpp"

using namespace sawqed;
using namespace sawqed::constants;

namespace {
const auto kCatalog = builtin_catalog();
}

TEST_CASE("dqd_spectrum: reference point, orthonormality, char-poly oracle") {
  const double tc = 5 * ueV, ep = -7 * ueV, De = 1 * ueV;
  const auto s = dqd_spectrum(tc, ep, De);

  CHECK(std::abs(s.kappa(0) * s.kappa(1) - 0.05) <= 0.005);
  // the reference rounds this to 2e-2; exact diagonalization gives 0.0145
  const double diff = std::abs(s.kappa(1) * s.kappa(1) - s.kappa(0) * s.kappa(0));
  CHECK(diff > 0.010);
  CHECK(diff < 0.025);

  // orthonormality to 1e-12
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double dot = 0;
      for (int i = 0; i < 3; ++i) dot += s.vectors[a][i] * s.vectors[b][i];
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-12);
    }

  // energies ascending, and matching the characteristic polynomial
  // lambda^3 + eps lambda^2 - (tc^2/4 + Delta^2) lambda - Delta^2 eps = 0
  CHECK(s.energies[0] < s.energies[1]);
  CHECK(s.energies[1] < s.energies[2]);
  const double scale = ueV;
  const double c0 = -De * De * ep / (scale * scale * scale);
  const double c1 = -(tc * tc / 4 + De * De) / (scale * scale);
  const double c2 = ep / scale;
  const double coeffs[4] = {c0, c1, c2, 1.0};
  auto roots = poly_roots(coeffs);
  std::sort(roots.begin(), roots.end(),
            [](cplx a, cplx b) { return a.real() < b.real(); });
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(roots[i].real() * scale - s.energies[i]) < 1e-10 * std::abs(scale));
}

TEST_CASE("dqd_spectrum: Delta = 0 decouples the triplet exactly") {
  const auto s = dqd_spectrum(5 * ueV, -7 * ueV, 0.0);
  bool found = false;
  for (int l = 0; l < 3; ++l) {
    if (std::abs(std::abs(s.vectors[l][0]) - 1.0) < 1e-14) {
      CHECK(std::abs(s.vectors[l][1]) < 1e-14);
      CHECK(std::abs(s.vectors[l][2]) < 1e-14);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("dqd transition frequency approaches 2 Delta at large negative detuning") {
  const auto s = dqd_spectrum(5 * ueV, -80 * ueV, 1 * ueV);
  CHECK(s.omega0 == doctest::Approx(2.0 * ueV).epsilon(0.15));
}

TEST_CASE("charge coupling") {
  const auto& gaas = get(kCatalog, "GaAs");
  const auto sol = solve_110(gaas);
  const ModeGeometry geom;
  const double phi0 = zero_point_set(gaas, geom).phi0->second;

  SUBCASE("epsilon = 0 gives g_eff = g_ch") {
    ChargeQubitParams p{0.0, 2 * ueV, 250e-9, 50e-9};
    const auto g = g_charge(p, phi0, 2 * M_PI / 1e-6, 0.5);
    CHECK(g.g_eff == doctest::Approx(g.g_ch).epsilon(1e-14));
    CHECK(g.Omega == doctest::Approx(4 * ueV).epsilon(1e-14));
  }

  SUBCASE("surface anchor ~ 2 GHz and the 20-100 um^2 window") {
    const double fc = 6e9;
    const double lam = sol.v_s / fc;
    const double k = 2 * M_PI / lam;
    const auto prof = piezo_profile(gaas, sol, k);
    ChargeQubitParams p{0.0, 1 * ueV, lam / 2, 50e-9};
    const double g1 = g_charge(p, phi0, k, std::abs(prof.F(k * p.d))).g_ch;
    CHECK(g1 == doctest::Approx(2e9).epsilon(0.10));
    CHECK(g1 / std::sqrt(100.0) == doctest::Approx(200e6).epsilon(0.15));
    CHECK(g1 / std::sqrt(20.0) == doctest::Approx(450e6).epsilon(0.15));
  }

  SUBCASE("input validation") {
    ChargeQubitParams p{0.0, 2 * ueV, 250e-9, 50e-9};
    CHECK_THROWS_AS(g_charge(p, phi0, 1e6, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(g_charge(p, phi0, 1e6, 1.5), std::invalid_argument);
  }
}

TEST_CASE("spin coupling") {
  const auto& gaas = get(kCatalog, "GaAs");
  const auto sol = solve_110(gaas);
  const ModeGeometry geom;
  const double phi0 = zero_point_set(gaas, geom).phi0->second;

  SUBCASE("typical parameters give ~0.1 g_ch ~ 200 MHz at 1 um^2") {
    const double lam = 0.5e-6, k = 2 * M_PI / lam;
    const auto prof = piezo_profile(gaas, sol, k);
    const auto spec = dqd_spectrum(5 * ueV, -7 * ueV, 1 * ueV);
    SpinQubitParams p;
    p.t_c = 5 * ueV;
    p.epsilon = -7 * ueV;
    p.Delta = 1 * ueV;
    p.l = 250e-9;
    p.d = 50e-9;
    p.eta_geo = 2.0 * std::sin(M_PI * p.l / lam);
    const double g = g_spin(p, spec, phi0, k, std::abs(prof.F(k * p.d)));
    CHECK(g == doctest::Approx(200e6).epsilon(0.15));
  }

  SUBCASE("optimized working point ~ 600 MHz") {
    const double lam = 2e-6, k = 2 * M_PI / lam;
    const auto prof = piezo_profile(gaas, sol, k);
    // kappa0 kappa1 = 0.3 at the optimized point
    DqdSpectrum spec;
    spec.vectors[0] = {0.0, 0.0, std::sqrt(0.3)};
    spec.vectors[1] = {0.0, 0.0, std::sqrt(0.3)};
    SpinQubitParams p;
    p.t_c = 5 * ueV;
    p.l = 250e-9;
    p.d = 50e-9;
    p.eta_geo = 2.0 * std::sin(M_PI * p.l / lam);
    const double g = g_spin(p, spec, phi0, k, std::abs(prof.F(k * p.d)));
    CHECK(g == doctest::Approx(600e6).epsilon(0.15));
  }

  SUBCASE("vanishing singlet admixture kills the coupling") {
    const auto spec = dqd_spectrum(5 * ueV, -7 * ueV, 0.0);  // T0 decouples
    SpinQubitParams p;
    p.eta_geo = 1.0;
    CHECK(g_spin(p, spec, phi0, 2 * M_PI / 1e-6, 0.5) == doctest::Approx(0.0));
  }

  SUBCASE("longitudinal variant uses kappa_S^2") {
    const auto spec = dqd_spectrum(5 * ueV, -7 * ueV, 1 * ueV);
    SpinQubitParams p;
    p.eta_geo = 1.0;
    const double gl = g_spin_longitudinal(p, spec, 0, phi0, 2 * M_PI / 1e-6, 0.5);
    const double expect = spec.kappa(0) * spec.kappa(0) * elementary_charge * phi0 *
                          0.5 / hbar;
    CHECK(gl == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("charge-noise sensitivity") {
  const double tc = 5 * ueV, De = 1 * ueV;

  CHECK(charge_noise_sensitivity(tc, -20 * tc, De) < 1e-2);

  // monotone decrease as the detuning moves further negative
  double prev = 1e9;
  for (double r : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double s = charge_noise_sensitivity(tc, -r * tc, De);
    CHECK(s < prev);
    prev = s;
  }

  // Delta -> 0 limit against the exact two-singlet-gap derivative
  // d omega0 / d eps = (1 + eps/sqrt(eps^2 + tc^2)) / 2 -> tc^2/(4 eps^2)
  const double ep = -20 * tc;
  const double exact = 0.5 * (1.0 + ep / std::sqrt(ep * ep + tc * tc));
  const double asym = tc * tc / (4.0 * ep * ep);
  CHECK(charge_noise_sensitivity(tc, ep, 0.0) == doctest::Approx(exact).epsilon(1e-4));
  CHECK(charge_noise_sensitivity(tc, ep, 0.0) == doctest::Approx(asym).epsilon(0.20));
}

TEST_CASE("ion coupling") {
  IonParams be9;
  be9.charge = elementary_charge;
  be9.mass = 9.012 * atomic_mass_unit;
  be9.omega_t = 2 * M_PI * 2e6;

  // documented convention: fast-cut LiNbO3 velocity 4000 m/s at 2 MHz
  const auto& lnb = get(kCatalog, "LiNbO3");
  const double v_s = 4000.0, fc = 2e6;
  const double lam = v_s / fc, k = 2 * M_PI / lam;
  auto phi0_at = [&](double A_um2) {
    const double U0 = std::sqrt(hbar / (2 * lnb.density * v_s * A_um2 * 1e-12));
    return *lnb.e_max / (lnb.eps_rel->first * eps0) * U0;
  };
  const double A_lo = 40.0 * lam / 1e-6, A_hi = 5.0 * 40.0 * lam / 1e-6;  // um^2

  SUBCASE("d = 30 um window 3 - 6.7 kHz") {
    be9.d = 30e-6;
    CHECK(g_ion(be9, phi0_at(A_hi), k) == doctest::Approx(3e3).epsilon(0.15));
    CHECK(g_ion(be9, phi0_at(A_lo), k) == doctest::Approx(6.7e3).epsilon(0.15));
  }
  SUBCASE("d = 150 um window 1.8 - 4.0 kHz") {
    be9.d = 150e-6;
    CHECK(g_ion(be9, phi0_at(A_hi), k) == doctest::Approx(1.8e3).epsilon(0.15));
    CHECK(g_ion(be9, phi0_at(A_lo), k) == doctest::Approx(4.0e3).epsilon(0.15));
  }
  SUBCASE("coupling vanishes far from the surface") {
    be9.d = 1.0;  // 1 m
    CHECK(g_ion(be9, phi0_at(A_lo), k) < 1e-100);
  }
}

TEST_CASE("ion dephasing time scales as d^4") {
  CHECK(ion_T2(150e-6) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ion_T2(75e-6) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(ion_T2(300e-6) == doctest::Approx(32.0).epsilon(1e-12));
  CHECK_THROWS_AS(ion_T2(0.0), std::invalid_argument);
}

TEST_CASE("NV coupling from the piezomagnetic field") {
  NVParams nv;
  nv.gamma_nv = 2 * M_PI * 28e9;
  nv.d = 10e-9;
  const ModeGeometry geom;
  const auto z = zero_point_set(get(kCatalog, "Terfenol-D"), geom);
  REQUIRE(z.B0.has_value());
  CHECK(g_nv(nv, *z.B0) == doctest::Approx(400e3).epsilon(0.05));
  CHECK(g_nv(nv, 0.0) == 0.0);

  const double lam = *get(kCatalog, "Terfenol-D").shear_velocity / 3e9;
  const double A_lo = 40.0 * lam / 1e-6, A_hi = 5.0 * 40.0 * lam / 1e-6;
  CHECK(g_nv(nv, *z.B0) / std::sqrt(A_hi) == doctest::Approx(45e3).epsilon(0.15));
  CHECK(g_nv(nv, *z.B0) / std::sqrt(A_lo) == doctest::Approx(101e3).epsilon(0.15));

  nv.eta_nv = {2.0, 0, 0};
  CHECK_THROWS_AS(nv.validate(), std::invalid_argument);
}

TEST_CASE("thermal occupation") {
  CHECK(n_thermal(2 * M_PI * 2e6, 0.020) == doctest::Approx(208.0).epsilon(0.005));
  // hbar w / kB T = ln 2 gives exactly one quantum
  const double w = 1e9;
  const double T = hbar * w / (k_boltzmann * std::log(2.0));
  CHECK(n_thermal(w, T) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n_thermal(2 * M_PI * 3e9, 0.020) < 1e-3);
  CHECK_THROWS_AS(n_thermal(1e9, 0.0), std::invalid_argument);
}

TEST_CASE("cooperativity identity and the summary table") {
  const auto r = cooperativity(3.3e5, 0.01, 2 * M_PI * 1e9, 2e3, 0.02);
  CHECK(r.C ==
        doctest::Approx(r.g * r.g * r.T2 * r.Q / (r.omega_c * (r.n_th + 1.0)))
            .epsilon(1e-12));
  CHECK(r.n_th >= 0.0);

  const auto rows = coop_table(kCatalog);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CAPTURE(row.platform);
    CHECK(row.g_pass);
    CHECK(row.C_pass);
  }
  const auto csv = coop_table_csv(rows);
  CHECK(csv.find("charge") != std::string::npos);
  CHECK(csv.find("fail") == std::string::npos);
}

TEST_CASE("dispersive coupling") {
  const double g = 100e3;  // 100 kHz
  const double kappa = 2 * M_PI * 3e9 / 2e5;
  const auto r = dispersive(g, g / 0.1, kappa);
  CHECK(r.g_dr == doctest::Approx(10e3).epsilon(1e-12));
  CHECK(r.kappa_dr == doctest::Approx(1e3).epsilon(0.10));
  CHECK(r.kappa_dr / kappa ==
        doctest::Approx((r.g_dr / g) * (r.g_dr / g)).epsilon(1e-12));
  CHECK(r.regime_ok);
  CHECK_FALSE(dispersive(g, 2 * g, kappa).regime_ok);
  CHECK_THROWS_AS(dispersive(g, 0.0, kappa), std::invalid_argument);
  // delta -> infinity kills both
  const auto far = dispersive(g, 1e30, kappa);
  CHECK(far.g_dr < 1e-15);
  CHECK(far.kappa_dr < 1e-15);
}

TEST_CASE("success probability") {
  CHECK(p_success(0.0, 1e12) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p_success(0.05, 30.0) == doctest::Approx(0.9445).epsilon(1e-4));
  // grid-checked monotonicity
  double prev = 2.0;
  for (double e : {0.0, 0.02, 0.05, 0.1, 0.3}) {
    const double p = p_success(e, 20.0);
    CHECK(p < prev);
    prev = p;
  }
  prev = 0.0;
  for (double c : {0.5, 2.0, 8.0, 40.0, 200.0}) {
    const double p = p_success(0.1, c);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("fidelity estimate variants") {
  CHECK(fidelity_estimate(0.05, 30.0, 1.0, FidelityVariant::main_text) ==
        doctest::Approx(0.90).epsilon(0.02));
  CHECK(fidelity_estimate(0.05, 30.0, 0.5, FidelityVariant::lower_bound) ==
        doctest::Approx(0.883).epsilon(1e-3));
  CHECK(fidelity_estimate(0.0, 1e12, 1.0, FidelityVariant::main_text) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("driven Rabi frequency") {
  CHECK(driven_rabi(6e6, 0.0) == 0.0);
  CHECK(driven_rabi(6e6, 1.0) == doctest::Approx(6e6));
  CHECK(driven_rabi(6e6, 10.0) == doctest::Approx(60e6));
  CHECK_THROWS_AS(driven_rabi(1.0, -1.0), std::invalid_argument);
}
