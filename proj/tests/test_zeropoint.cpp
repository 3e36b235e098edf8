#include <tuple>
#include <utility>

#include <doctest.h>

#include <cmath>

#include "sawqed/constants.hpp"
#include "sawqed/zeropoint.hpp"

using namespace sawqed;

namespace {
const auto kCatalog = builtin_catalog();
const ModeGeometry kDefaultGeom;  // A = 1 um^2, k = 2pi/um
}

TEST_CASE("u0_simple reference values") {
  const auto& gaas = get(kCatalog, "GaAs");
  const double u0 = u0_simple(gaas, kDefaultGeom);
  CHECK(u0 == doctest::Approx(1.86e-15).epsilon(0.01));
  CHECK(u0 == doctest::Approx(1.9e-15).epsilon(0.05));  // reported rounding

  ModeGeometry g4;
  g4.A = 4e-12;
  CHECK(u0_simple(gaas, g4) == doctest::Approx(0.5 * u0).epsilon(1e-12));

  CHECK(u0_simple(get(kCatalog, "diamond"), kDefaultGeom) ==
        doctest::Approx(1.17e-15).epsilon(0.05));
}

TEST_CASE("u0_normalized reproduces the mode-normalization factors") {
  for (auto [name, factor, delta_ref] :
       {std::tuple{"GaAs", 0.64, 1.2}, std::tuple{"diamond", 1.17, 0.44}}) {
    const auto& m = get(kCatalog, name);
    const auto sol = solve_110(m);
    const auto [u0, delta] = u0_normalized(m, kDefaultGeom, sol);
    const double ratio = u0 / u0_simple(m, kDefaultGeom);
    CHECK(std::abs(ratio - factor) <= 0.02);
    CHECK(delta == doctest::Approx(delta_ref).epsilon(0.05));
  }
  // normalized against simple: GaAs ~ 1.2 fm, diamond ~ 1.36 fm
  const auto& gaas = get(kCatalog, "GaAs");
  CHECK(u0_normalized(gaas, kDefaultGeom, solve_110(gaas)).first ==
        doctest::Approx(1.2e-15).epsilon(0.05));
  const auto& dia = get(kCatalog, "diamond");
  CHECK(u0_normalized(dia, kDefaultGeom, solve_110(dia)).first ==
        doctest::Approx(1.36e-15).epsilon(0.05));
}

TEST_CASE("u0_energy_density estimates") {
  const auto& gaas = get(kCatalog, "GaAs");
  const double v = resolve_velocity(gaas);
  const double u0 = u0_energy_density(kDefaultGeom, 28.2e10, v);
  CHECK(u0 == doctest::Approx(1.05e-15).epsilon(0.03));

  // literature constant form C sqrt(2 hbar / rho v A), C = 0.45 for this case
  const double u0_lit =
      0.45 * std::sqrt(2 * constants::hbar / (gaas.density * v * kDefaultGeom.A));
  CHECK(u0_lit == doctest::Approx(1.7e-15).epsilon(0.02));

  // the estimates agree within a factor 2
  const double ratio = u0_simple(gaas, kDefaultGeom) / u0;
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);

  // large-area limit: conservative ~2 am, well below the ~30 am inference
  ModeGeometry big;
  big.A = 1e-6;  // 1e6 um^2
  const double u_big = u0_simple(gaas, big);
  CHECK(u_big > 1.5e-18);
  CHECK(u_big < 2.5e-18);
  CHECK(u_big < 30e-18);
}

TEST_CASE("zero-point table rows within 5% of the reference set") {
  struct Row {
    const char* name;
    double U0_fm, s0_1e9;
    double phi_lo_uV, phi_hi_uV;  // <0 means absent
    double xi_lo, xi_hi;
    double B0_uT;  // <0 means absent
  };
  const Row rows[] = {
      {"GaAs", 1.9, 11.7, 3.1, 3.1, 19.2, 19.2, -1},
      {"LiNbO3", 1.8, 11.3, 0.9, 25.8, 5.8, 162.2, -1},
      {"Quartz", 2.75, 17.3, 2.8, 12.0, 17.3, 75.4, -1},
      {"Terfenol-D", 2.2, 13.8, -1, -1, -1, -1, 2.3},
      {"CoFe2O4", 1.8, 11.4, -1, -1, -1, -1, 6.3},
      {"diamond", 1.17, 7.4, -1, -1, -1, -1, -1},
  };
  for (const auto& r : rows) {
    CAPTURE(r.name);
    const auto z = zero_point_set(get(kCatalog, r.name), kDefaultGeom);
    CHECK(z.U0 * 1e15 == doctest::Approx(r.U0_fm).epsilon(0.05));
    CHECK(z.s0 * 1e9 == doctest::Approx(r.s0_1e9).epsilon(0.05));
    if (r.phi_lo_uV > 0) {
      REQUIRE(z.phi0.has_value());
      CHECK(z.phi0->first * 1e6 == doctest::Approx(r.phi_lo_uV).epsilon(0.05));
      CHECK(z.phi0->second * 1e6 == doctest::Approx(r.phi_hi_uV).epsilon(0.05));
      CHECK(z.xi0->first == doctest::Approx(r.xi_lo).epsilon(0.05));
      CHECK(z.xi0->second == doctest::Approx(r.xi_hi).epsilon(0.05));
    } else {
      CHECK(!z.phi0.has_value());
    }
    if (r.B0_uT > 0) {
      REQUIRE(z.B0.has_value());
      CHECK(*z.B0 * 1e6 == doctest::Approx(r.B0_uT).epsilon(0.05));
    } else {
      CHECK(!z.B0.has_value());
    }
  }
}

TEST_CASE("every zero-point field scales as A^(-1/2)") {
  for (double factor : {2.0, 9.0, 100.0}) {
    ModeGeometry g;
    g.A = kDefaultGeom.A * factor;
    const double s = 1.0 / std::sqrt(factor);
    for (const auto& m : kCatalog) {
      const auto z1 = zero_point_set(m, kDefaultGeom);
      const auto z2 = zero_point_set(m, g);
      CHECK(z2.U0 == doctest::Approx(z1.U0 * s).epsilon(1e-12));
      CHECK(z2.s0 == doctest::Approx(z1.s0 * s).epsilon(1e-12));
      if (z1.phi0) {
        CHECK(z2.phi0->first == doctest::Approx(z1.phi0->first * s).epsilon(1e-12));
        CHECK(z2.xi0->second == doctest::Approx(z1.xi0->second * s).epsilon(1e-12));
      }
      if (z1.B0) CHECK(*z2.B0 == doctest::Approx(*z1.B0 * s).epsilon(1e-12));
    }
  }
}

TEST_CASE("s0 = k U0 and xi0 = k phi0 component-wise") {
  for (const auto& m : kCatalog) {
    const auto z = zero_point_set(m, kDefaultGeom);
    CHECK(z.s0 == doctest::Approx(kDefaultGeom.k * z.U0).epsilon(1e-14));
    if (z.phi0) {
      CHECK(z.xi0->first == doctest::Approx(kDefaultGeom.k * z.phi0->first).epsilon(1e-14));
      CHECK(z.xi0->second ==
            doctest::Approx(kDefaultGeom.k * z.phi0->second).epsilon(1e-14));
    }
  }
}

TEST_CASE("piezomagnetic rows use the bulk-shear fallback and are flagged") {
  const auto z = zero_point_set(get(kCatalog, "Terfenol-D"), kDefaultGeom);
  CHECK(z.conservative);
  CHECK(!zero_point_set(get(kCatalog, "GaAs"), kDefaultGeom).conservative);
}

TEST_CASE("table CSV is deterministic") {
  const auto a = zero_point_table_csv(kCatalog, kDefaultGeom);
  const auto b = zero_point_table_csv(kCatalog, kDefaultGeom);
  CHECK(a == b);
  CHECK(a.find("GaAs") != std::string::npos);
  CHECK(a.find("Terfenol-D") != std::string::npos);
}

TEST_CASE("geometry validation") {
  ModeGeometry g;
  g.A = -1;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  ModeGeometry g2;
  g2.L_trans = 2e-6;
  g2.L_c = 3e-6;
  g2.A = 6e-12;
  CHECK_NOTHROW(g2.validate());
  g2.A = 7e-12;
  CHECK_THROWS_AS(g2.validate(), std::invalid_argument);
}
