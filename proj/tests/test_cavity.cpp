#include <doctest.h>

#include <cmath>

#include "sawqed/cavity.hpp"
#include "sawqed/zeropoint.hpp"

using namespace sawqed;

namespace {
const auto kCatalog = builtin_catalog();
const MaterialRecord& lnb() { return get(kCatalog, "LiNbO3"); }
double lam3GHz() { return resolve_velocity(lnb()) / 3e9; }
}

TEST_CASE("center frequency from the Bragg condition") {
  CHECK(center_frequency(lnb(), 0.5813e-6) == doctest::Approx(3e9).epsilon(1e-3));
  CHECK(center_frequency(get(kCatalog, "GaAs"), 0.4797e-6) ==
        doctest::Approx(3e9).epsilon(1e-3));
  const double f1 = center_frequency(lnb(), 0.4e-6);
  CHECK(center_frequency(lnb(), 0.8e-6) == doctest::Approx(0.5 * f1).epsilon(1e-14));
  CHECK_THROWS_AS(center_frequency(lnb(), 0.0), std::invalid_argument);
}

TEST_CASE("single-groove reflection coefficient") {
  MirrorSpec spec{100, 0.02, 0.5, "LiNbO3"};
  CHECK(groove_reflection(lnb(), spec) == doctest::Approx(0.0134).epsilon(1e-12));

  // r_s -> 0 with vanishing groove depth
  spec.h_over_lambda = 1e-8;
  CHECK(groove_reflection(lnb(), spec) < 1e-8);

  // at w/p = 1/2 the quadratic stored-energy term drops out exactly
  MirrorSpec s2{100, 0.03, 0.5, "LiNbO3"};
  MaterialRecord noC2 = lnb();
  noC2.mirror_C2 = 0.0;
  CHECK(groove_reflection(lnb(), s2) == doctest::Approx(groove_reflection(noC2, s2)));

  // missing coefficients
  CHECK_THROWS_AS(groove_reflection(get(kCatalog, "GaAs"), s2), std::invalid_argument);

  MirrorSpec bad{0, 0.02, 0.5, ""};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("budget reproduces the reference design point") {
  const double lam = lam3GHz();
  MirrorSpec spec{100, 0.02, 0.5, "LiNbO3"};
  const auto b = budget(lnb(), spec, 5.25 * lam, 1e-6, 3e9);
  CHECK(b.Q == doctest::Approx(1e3).epsilon(0.10));
  CHECK(b.ratio_gd_bd >= 20.0);
  CHECK(b.R_total == doctest::Approx(std::tanh(100 * 0.0134)).epsilon(1e-12));

  MirrorSpec s300{300, 0.02, 0.5, "LiNbO3"};
  CHECK(budget(lnb(), s300, 5.25 * lam, 1e-6, 3e9).L_c / lam ==
        doctest::Approx(42.0).epsilon(2.0 / 42.0));
  CHECK(budget(lnb(), s300, 0.75 * lam, 1e-6, 3e9).L_c / lam ==
        doctest::Approx(38.0).epsilon(2.0 / 38.0));
}

TEST_CASE("budget identities hold to 1e-12") {
  const double lam = lam3GHz();
  for (int N : {20, 100, 300}) {
    for (double h : {0.005, 0.02, 0.05}) {
      MirrorSpec spec{N, h, 0.5, "LiNbO3"};
      const auto b = budget(lnb(), spec, 5.25 * lam, 1e-6, 3e9);
      CHECK(std::abs(1.0 / b.Q - (1.0 / b.Q_r + 1.0 / b.Q_bk + 1.0 / b.Q_m)) <
            1e-12 / b.Q);
      CHECK(b.kappa == doctest::Approx(b.kappa_gd + b.kappa_bd).epsilon(1e-12));
      const double wc = 2 * M_PI * b.f_c;
      CHECK(b.kappa_gd == doctest::Approx(wc / b.Q_r).epsilon(1e-12));
      CHECK(b.kappa_bd == doctest::Approx(wc / b.Q_bk + wc / b.Q_m).epsilon(1e-12));
      CHECK(b.A == doctest::Approx(1e-6 * b.L_c).epsilon(1e-12));
      CHECK(0.0 < b.R_total);
      CHECK(b.R_total < 1.0);
    }
  }
}

TEST_CASE("degenerate mirror and invalid grids are rejected") {
  MirrorSpec spec{100, 0.0, 0.5, "LiNbO3"};
  CHECK_THROWS_AS(budget(lnb(), spec, 1e-6, 1e-6, 3e9), std::invalid_argument);
  CHECK_THROWS_AS(q_sweep(lnb(), 100, {0.2}, 1e-6, 0.5, 3e9, 1e-6),
                  std::invalid_argument);
}

TEST_CASE("sweep reproduces the loss regimes") {
  const double lam = lam3GHz();
  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) grid.push_back(0.0005 * i);  // 0.05% .. 5%
  const auto s300 = q_sweep(lnb(), 300, grid, 5.25 * lam, 0.5, 3e9, 1e-6);
  const auto s100 = q_sweep(lnb(), 100, grid, 5.25 * lam, 0.5, 3e9, 1e-6);

  // bulk-limit onset for N = 300 near h/lambda = 2.5%
  const double onset = bulk_limit_onset(s300);
  CHECK(onset >= 0.020);
  CHECK(onset <= 0.030);

  // kappa_gd/kappa_bd decreases monotonically with groove depth
  for (size_t i = 1; i < s300.size(); ++i)
    CHECK(s300[i].b.ratio_gd_bd <= s300[i - 1].b.ratio_gd_bd * (1 + 1e-12));

  // in the mirror-loss-limited regime more grooves mean higher Q
  for (size_t i = 0; i < s300.size(); ++i) {
    const auto& b = s100[i].b;
    const bool qr_dominated = 1.0 / b.Q_r > std::max(1.0 / b.Q_bk, 1.0 / b.Q_m);
    if (qr_dominated) CHECK(s100[i].b.Q <= s300[i].b.Q * (1 + 1e-12));
  }

  // R_total strictly increasing in N at fixed h
  const double h = 0.01;
  double prev = 0;
  for (int N : {10, 50, 100, 200, 400}) {
    MirrorSpec spec{N, h, 0.5, "LiNbO3"};
    const double R = budget(lnb(), spec, 5.25 * lam, 1e-6, 3e9).R_total;
    CHECK(R > prev);
    prev = R;
  }

  const auto csv = sweep_csv(s300);
  CHECK(csv.find("h_over_lambda,Q,Q_r,Q_bk,Q_m,ratio_gd_bd") == 0);
  CHECK(csv == sweep_csv(s300));
}

TEST_CASE("design search") {
  const double lam = lam3GHz();
  const auto r = design_search(lnb(), 3e9, 1e3, 20.0, 5.25 * lam, 0.5, 1e-6);
  CHECK(r.spec.N <= 100);
  CHECK(r.spec.h_over_lambda == doctest::Approx(0.02).epsilon(0.15));
  CHECK(r.budget.Q >= 1e3);
  CHECK(r.budget.ratio_gd_bd >= 20.0);

  // minimal-N tie-break: a trivial target lands on the first grid row
  const auto tiny = design_search(lnb(), 3e9, 1.0, 1.0, 5.25 * lam, 0.5, 1e-6);
  CHECK(tiny.spec.N == 1);

  CHECK_THROWS_WITH_AS(design_search(lnb(), 3e9, 1e3, 1e6, 5.25 * lam, 0.5, 1e-6),
                       doctest::Contains("infeasible"), std::runtime_error);
  CHECK_THROWS_AS(design_search(lnb(), 3e9, -1.0, 20.0, 5.25 * lam, 0.5, 1e-6),
                  std::invalid_argument);
}

TEST_CASE("single-resonance condition on catalog sweeps") {
  const double lam = lam3GHz();
  for (int N : {100, 300}) {
    for (int i = 1; i <= 60; ++i) {
      const double h = 0.001 * i;
      MirrorSpec spec{N, h, 0.5, "LiNbO3"};
      const auto b = budget(lnb(), spec, 5.25 * lam, 1e-6, 3e9);
      if (b.r_s <= 0.05) CHECK(b.mode_spacing_rel > b.bandwidth_rel);
    }
  }
}
