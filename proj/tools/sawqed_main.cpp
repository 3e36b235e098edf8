// Command-line front end: every computation in the library exposed as a
// subcommand with deterministic, file-based CSV/JSON outputs.

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sawqed/cavity.hpp"
#include "sawqed/constants.hpp"
#include "sawqed/couplings.hpp"
#include "sawqed/dynamics.hpp"
#include "sawqed/materials.hpp"
#include "sawqed/rayleigh.hpp"
#include "sawqed/zeropoint.hpp"

namespace {

using namespace sawqed;

double parse_with_suffix(const std::string& text, const std::string& what,
                         const std::vector<std::pair<std::string, double>>& units,
                         double default_scale) {
  size_t pos = 0;
  double value;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw CLI::ValidationError(what, "cannot parse '" + text + "'");
  }
  std::string suffix = text.substr(pos);
  while (!suffix.empty() && suffix.front() == ' ') suffix.erase(0, 1);
  if (suffix.empty()) return value * default_scale;
  for (const auto& [name, scale] : units)
    if (suffix == name) return value * scale;
  throw CLI::ValidationError(what, "unknown unit suffix '" + suffix + "' in '" + text + "'");
}

double parse_freq(const std::string& s) {  // default Hz
  return parse_with_suffix(s, "frequency",
                           {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}, 1.0);
}

double parse_length(const std::string& s) {  // default m
  return parse_with_suffix(s, "length",
                           {{"nm", 1e-9}, {"um", 1e-6}, {"mm", 1e-3}, {"m", 1.0}}, 1.0);
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::fputs(content.c_str(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + out_path + "'");
  f << content;
}

std::vector<MaterialRecord> catalog_from_env(const std::string& override_path) {
  if (!override_path.empty()) return load_catalog(override_path);
  if (const char* env = std::getenv("SAWQED_CATALOG"); env && *env)
    return load_catalog(env);
  return builtin_catalog();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

int run_validate(const std::vector<MaterialRecord>& cat) {
  int failures = 0;
  auto check = [&failures](bool ok, const std::string& name) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name.c_str());
    if (!ok) ++failures;
  };

  for (const auto& m : cat) {
    bool ok = true;
    try {
      m.validate();
    } catch (const std::exception&) {
      ok = false;
    }
    check(ok, "material invariants: " + m.name);
  }

  for (const char* name : {"GaAs", "AlGaAs", "diamond"}) {
    const auto& m = get(cat, name);
    const auto sol = solve_110(m);
    check(velocity_cubic_residual(m, sol.X) < 1e-10,
          std::string(name) + ": velocity-cubic residual < 1e-10");
    check(secular_residual_110(m, sol.X, sol.q) < 1e-10,
          std::string(name) + ": secular residual < 1e-10");
    const cxd lhs = std::exp(cxd(0, -2.0 * sol.phi)) +
                    (std::conj(sol.gamma) - std::conj(sol.q)) / (sol.gamma - sol.q);
    check(std::abs(lhs) < 1e-8, std::string(name) + ": phase identity < 1e-8");
    check(boundary_det_110(m, sol) < 1e-8, std::string(name) + ": |det B| < 1e-8");
    check(sol.v_s < std::sqrt(*m.c44 / m.density),
          std::string(name) + ": sub-bulk velocity");
    if (m.e14 && *m.e14 > 0) {
      const double k = 2 * M_PI / 1e-6;
      const auto prof = piezo_profile(m, sol, k);
      check(std::abs(prof.F(0.0) - prof.vacuum_side(0.0)) < 1e-10,
            std::string(name) + ": potential continuity at z=0");
    }
  }

  {
    ModeGeometry g1, g4;
    g4.A = 4e-12;
    bool ok = true;
    for (const auto& m : cat) {
      try {
        const auto z1 = zero_point_set(m, g1);
        const auto z4 = zero_point_set(m, g4);
        ok = ok && std::abs(z4.U0 * 2.0 - z1.U0) < 1e-12 * z1.U0;
        ok = ok && std::abs(z1.s0 - g1.k * z1.U0) < 1e-15;
      } catch (const std::exception&) {
      }
    }
    check(ok, "zero-point A^(-1/2) scaling and s0 = k U0");
  }

  {
    const auto& lnb = get(cat, "LiNbO3");
    bool ok = true, single_res = true;
    double prevR = 0;
    for (int i = 1; i <= 40; ++i) {
      const double h = 0.0025 * i;
      MirrorSpec spec{150, h, 0.5, lnb.name};
      const auto b = budget(lnb, spec, 5.25 * 1e-6, 1e-6, 3e9);
      ok = ok && std::abs(1.0 / b.Q - (1.0 / b.Q_r + 1.0 / b.Q_bk + 1.0 / b.Q_m)) < 1e-12;
      ok = ok && std::abs(b.kappa - (b.kappa_gd + b.kappa_bd)) < 1e-12 * b.kappa;
      ok = ok && b.R_total > prevR - 1e-15;
      if (b.r_s <= 0.05) single_res = single_res && b.mode_spacing_rel > b.bandwidth_rel;
      prevR = b.R_total;
    }
    check(ok, "cavity: Q additivity and kappa split identities");
    check(single_res, "cavity: single-resonance condition (r_s <= 0.05)");
  }

  {
    const auto r = cooperativity(2e8, 10e-9, 2 * M_PI * 6e9, 1e3, 0.02);
    check(std::abs(r.C - r.g * r.g * r.T2 * r.Q / (r.omega_c * (r.n_th + 1))) <
              1e-12 * r.C,
          "cooperativity identity");
    bool mono = true;
    double prev = 2.0;
    for (double e : {0.0, 0.05, 0.1, 0.2}) {
      const double p = p_success(e, 30.0);
      mono = mono && p <= prev;
      prev = p;
    }
    double prevc = 0.0;
    for (double c : {1.0, 3.0, 10.0, 100.0}) {
      const double p = p_success(0.05, c);
      mono = mono && p >= prevc;
      prevc = p;
    }
    check(mono, "p_success monotonicity in eps and C");
  }

  {
    HilbertSpec s{2, 2, 2};
    auto [g1p, g2p] = optimal_pulse(1.0, 20.0);
    NoiseSpec n;
    n.kappa_gd = 1.0;
    const cxd al(1 / std::sqrt(2.0), 0), be(-1 / std::sqrt(2.0), 0);
    auto r = transfer_run(g1p, g2p, n, 0, 0, al, be, s);
    check(r.traj.max_trace_dev < 1e-8, "trajectory trace preserved to 1e-8");
    check(r.traj.max_herm_dev < 1e-10, "trajectory Hermiticity to 1e-10");
    check(r.traj.min_eigenvalue > -1e-7, "trajectory positivity bound");
    check(r.fidelity > 0.999, "noise-free optimal-pulse transfer F > 0.999");
    const double ratio = hahn_echo_error(0.02, 1.0, 1.0) / hahn_echo_error(0.01, 1.0, 1.0);
    check(ratio > 3.5 && ratio < 4.5, "Hahn-echo O(tau^2) ratio in [3.5, 4.5]");
  }

  std::printf("%s (%d failure%s)\n",
              failures == 0 ? "VALIDATION PASSED" : "VALIDATION FAILED", failures,
              failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "SAW cavity-QED toolkit: Rayleigh-mode solvers, zero-point and cavity "
      "budgets, qubit-phonon couplings, and cascaded transfer simulations"};
  app.require_subcommand(1);

  std::string catalog_path;
  app.add_option("--catalog", catalog_path,
                 "user material catalog (JSON; overrides SAWQED_CATALOG)");

  // ---- materials ----
  auto* mat = app.add_subcommand("materials", "material catalog access");
  auto* mat_list = mat->add_subcommand("list", "list catalog records (CSV)");
  std::string mat_list_out;
  mat_list->add_option("--out", mat_list_out, "output path (default stdout)");
  auto* mat_show = mat->add_subcommand("show", "one record as JSON");
  std::string show_name, mat_show_out;
  mat_show->add_option("--material", show_name)->required();
  mat_show->add_option("--out", mat_show_out);

  // ---- mode solve ----
  auto* mode = app.add_subcommand("mode", "surface-mode solvers");
  auto* mode_solve = mode->add_subcommand(
      "solve", "Rayleigh solution: [110] closed form, or a general-direction "
               "scan with --theta");
  std::string ms_mat, ms_out;
  double ms_theta = -1.0;
  mode_solve->add_option("--material", ms_mat)->required();
  mode_solve->add_option("--theta", ms_theta, "propagation angle in degrees");
  mode_solve->add_option("--out", ms_out);

  // ---- zeropoint ----
  auto* zp = app.add_subcommand("zeropoint", "zero-point fluctuation estimates");
  auto* zp_table = zp->add_subcommand(
      "table", "per-material zero-point table: U0, s0, phi0, xi0, B0");
  double zp_area = 1.0, zp_k = 2.0 * M_PI;
  std::string zp_out;
  zp_table->add_option("--area", zp_area, "mode area in um^2 (default 1)");
  zp_table->add_option("--k", zp_k, "wavenumber in rad/um (default 2pi)");
  zp_table->add_option("--out", zp_out);

  // ---- cavity ----
  auto* cav = app.add_subcommand("cavity", "Bragg-mirror resonator budgets");
  auto* cav_sweep = cav->add_subcommand(
      "sweep", "Q budget vs normalized groove depth (Q, Q_r, Q_bk, Q_m, ratio)");
  std::string cs_mat = "LiNbO3", cs_fc = "3GHz", cs_out;
  int cs_N = 300, cs_steps = 50;
  double cs_hmin = 0.001, cs_hmax = 0.05, cs_D = 5.25, cs_wp = 0.5, cs_ltrans = 1.0;
  cav_sweep->add_option("--material", cs_mat);
  cav_sweep->add_option("--N", cs_N, "grooves per mirror");
  cav_sweep->add_option("--h-min", cs_hmin);
  cav_sweep->add_option("--h-max", cs_hmax);
  cav_sweep->add_option("--h-steps", cs_steps);
  cav_sweep->add_option("--D", cs_D, "mirror gap in units of lambda_c");
  cav_sweep->add_option("--w-over-p", cs_wp);
  cav_sweep->add_option("--fc", cs_fc, "center frequency (Hz/MHz/GHz suffix)");
  cav_sweep->add_option("--l-trans", cs_ltrans, "transverse confinement in um");
  cav_sweep->add_option("--out", cs_out);

  auto* cav_design = cav->add_subcommand(
      "design", "smallest-N mirror meeting Q and linewidth-ratio targets");
  std::string cd_mat = "LiNbO3", cd_fc = "3GHz", cd_out;
  double cd_q = 1e3, cd_ratio = 20.0, cd_D = 5.25, cd_wp = 0.5, cd_ltrans = 1.0;
  cav_design->add_option("--material", cd_mat);
  cav_design->add_option("--fc", cd_fc);
  cav_design->add_option("--target-q", cd_q)->required();
  cav_design->add_option("--min-ratio", cd_ratio)->required();
  cav_design->add_option("--D", cd_D);
  cav_design->add_option("--w-over-p", cd_wp);
  cav_design->add_option("--l-trans", cd_ltrans);
  cav_design->add_option("--out", cd_out);

  // ---- couple ----
  auto* cpl = app.add_subcommand("couple", "single-phonon coupling estimates");
  auto* cp_charge = cpl->add_subcommand("charge", "charge-qubit coupling g_ch");
  std::string cc_mat = "GaAs", cc_fc = "6GHz", cc_d = "50nm", cc_l, cc_out;
  double cc_area = 1.0;
  cp_charge->add_option("--material", cc_mat);
  cp_charge->add_option("--fc", cc_fc);
  cp_charge->add_option("--d", cc_d, "dot depth (length suffix)");
  cp_charge->add_option("--l", cc_l, "dot separation (default lambda/2)");
  cp_charge->add_option("--area", cc_area, "mode area in um^2");
  cp_charge->add_option("--out", cc_out);

  auto* cp_spin = cpl->add_subcommand("spin", "singlet-triplet qubit coupling g_QD");
  std::string sp_mat = "GaAs", sp_lam = "0.5um", sp_d = "50nm", sp_l = "250nm", sp_out;
  double sp_tc = 5.0, sp_eps = -7.0, sp_delta = 1.0, sp_area = 1.0;
  cp_spin->add_option("--material", sp_mat);
  cp_spin->add_option("--tc", sp_tc, "tunnel coupling in ueV");
  cp_spin->add_option("--eps", sp_eps, "detuning in ueV");
  cp_spin->add_option("--delta", sp_delta, "gradient in ueV");
  cp_spin->add_option("--lambda", sp_lam);
  cp_spin->add_option("--d", sp_d);
  cp_spin->add_option("--l", sp_l);
  cp_spin->add_option("--area", sp_area, "mode area in um^2");
  cp_spin->add_option("--out", sp_out);

  auto* cp_ion = cpl->add_subcommand("ion", "trapped-ion coupling g_ion");
  std::string io_mat = "LiNbO3", io_d = "150um", io_fc = "2MHz", io_out;
  double io_mass = 9.012, io_trap = 2.0, io_area = 69760.0, io_vs = 4000.0;
  cp_ion->add_option("--material", io_mat);
  cp_ion->add_option("--d", io_d, "ion height (length suffix)");
  cp_ion->add_option("--mass", io_mass, "ion mass in amu");
  cp_ion->add_option("--trap-mhz", io_trap, "axial trap frequency in MHz");
  cp_ion->add_option("--fc", io_fc);
  cp_ion->add_option("--area", io_area, "mode area in um^2");
  cp_ion->add_option("--vs", io_vs, "SAW velocity override in m/s (0 = catalog)");
  cp_ion->add_option("--out", io_out);

  auto* cp_nv = cpl->add_subcommand("nv", "NV-center coupling g_NV");
  std::string nv_mat = "Terfenol-D", nv_out;
  double nv_area = 1.0;
  cp_nv->add_option("--material", nv_mat, "piezomagnetic layer");
  cp_nv->add_option("--area", nv_area, "mode area in um^2");
  cp_nv->add_option("--out", nv_out);

  // ---- coop ----
  auto* coop = app.add_subcommand("coop", "coupling/cooperativity summary");
  auto* coop_tab = coop->add_subcommand(
      "table", "four-platform g and C ranges with pass/fail vs references");
  std::string coop_out;
  coop_tab->add_option("--out", coop_out);

  // ---- transfer ----
  auto* tr = app.add_subcommand("transfer", "cascaded two-node state transfer");
  auto* tr_run = tr->add_subcommand(
      "run", "transfer fidelity, deterministic or Monte Carlo over quasi-static "
             "detuning noise (JSON summary; optional trajectory CSV)");
  std::string tp = "optimal", tr_out, tr_traj_out;
  double tr_eps = 0.0, tr_sigma = 0.0, tr_gamma = 0.0;
  int tr_runs = 1;
  std::uint64_t tr_seed = 0;
  tr_run->add_option("--pulse", tp)->check(CLI::IsMember({"const", "optimal"}));
  tr_run->add_option("--eps", tr_eps, "kappa_bd/kappa_gd");
  tr_run->add_option("--sigma", tr_sigma, "sigma_nuc/kappa_gd");
  tr_run->add_option("--gamma-deph", tr_gamma, "Gamma_deph/kappa_gd (Markovian)");
  tr_run->add_option("--runs", tr_runs);
  tr_run->add_option("--seed", tr_seed);
  tr_run->add_option("--out", tr_out);
  tr_run->add_option("--traj-out", tr_traj_out, "trajectory CSV for a single run");

  app.add_subcommand("validate", "run the full invariant suite (exit 2 on failure)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto cat = catalog_from_env(catalog_path);

    if (mat_list->parsed()) {
      std::ostringstream os;
      os << "name,c11,c12,c44,density,e14,eps_min,eps_max,h15,shear_velocity,"
            "estimate_only\n";
      for (const auto& m : cat) {
        os << m.name << ',';
        auto opt = [&os](const std::optional<double>& v, double scale = 1.0) {
          if (v) os << *v / scale;
          os << ',';
        };
        opt(m.c11, 1e10);
        opt(m.c12, 1e10);
        opt(m.c44, 1e10);
        os << m.density << ',';
        opt(m.e14);
        if (m.eps_rel)
          os << m.eps_rel->first << ',' << m.eps_rel->second << ',';
        else
          os << ",,";
        opt(m.h15);
        opt(m.shear_velocity);
        os << (m.estimate_only ? "yes" : "no") << '\n';
      }
      write_output(mat_list_out, os.str());
      return 0;
    }
    if (mat_show->parsed()) {
      write_output(mat_show_out, serialize_catalog({get(cat, show_name)}));
      return 0;
    }
    if (mode_solve->parsed()) {
      const auto& m = get(cat, ms_mat);
      std::ostringstream os;
      if (ms_theta >= 0.0) {
        const double theta = ms_theta * M_PI / 180.0;
        const auto g = solve_general(m, theta, default_c_window(m));
        os << fmt("{\n  \"material\": \"%s\",\n  \"theta_deg\": %.6g,\n  \"c\": %.8g,\n",
                  m.name.c_str(), ms_theta, g.c);
        os << "  \"roots\": [";
        for (size_t i = 0; i < g.roots.size(); ++i)
          os << fmt("%s[%.8g, %.8g]", i ? ", " : "", g.roots[i].real(),
                    g.roots[i].imag());
        os << fmt("],\n  \"detB_min\": %.3g\n}\n", g.detB_min);
      } else {
        const auto s = solve_110(m);
        os << fmt("{\n  \"material\": \"%s\",\n  \"v_s\": %.8g,\n  \"X\": %.10g,\n"
                  "  \"q\": [%.8g, %.8g],\n  \"gamma\": [%.8g, %.8g],\n"
                  "  \"phi\": %.8g\n}\n",
                  m.name.c_str(), s.v_s, s.X, s.q.real(), s.q.imag(), s.gamma.real(),
                  s.gamma.imag(), s.phi);
      }
      write_output(ms_out, os.str());
      return 0;
    }
    if (zp_table->parsed()) {
      ModeGeometry geom;
      geom.A = zp_area * 1e-12;
      geom.k = zp_k * 1e6;
      write_output(zp_out, zero_point_table_csv(cat, geom));
      return 0;
    }
    if (cav_sweep->parsed()) {
      const auto& m = get(cat, cs_mat);
      const double fc = parse_freq(cs_fc);
      const double lam = resolve_velocity(m) / fc;
      std::vector<double> grid;
      for (int i = 0; i < cs_steps; ++i)
        grid.push_back(cs_hmin + (cs_hmax - cs_hmin) * i / std::max(1, cs_steps - 1));
      const auto rows = q_sweep(m, cs_N, grid, cs_D * lam, cs_wp, fc, cs_ltrans * 1e-6);
      write_output(cs_out, sweep_csv(rows));
      return 0;
    }
    if (cav_design->parsed()) {
      const auto& m = get(cat, cd_mat);
      const double fc = parse_freq(cd_fc);
      const double lam = resolve_velocity(m) / fc;
      const auto r =
          design_search(m, fc, cd_q, cd_ratio, cd_D * lam, cd_wp, cd_ltrans * 1e-6);
      write_output(cd_out,
                   fmt("{\n  \"N\": %d,\n  \"h_over_lambda\": %.6g,\n"
                       "  \"w_over_p\": %.6g,\n  \"Q\": %.6g,\n"
                       "  \"ratio_gd_bd\": %.6g,\n  \"L_c_over_lambda\": %.6g\n}\n",
                       r.spec.N, r.spec.h_over_lambda, r.spec.w_over_p, r.budget.Q,
                       r.budget.ratio_gd_bd, r.budget.L_c / r.budget.lambda_c));
      return 0;
    }
    if (cp_charge->parsed()) {
      const auto& m = get(cat, cc_mat);
      const auto sol = solve_110(m);
      const double fc = parse_freq(cc_fc);
      const double lam = sol.v_s / fc;
      const double k = 2 * M_PI / lam;
      const double l = cc_l.empty() ? lam / 2.0 : parse_length(cc_l);
      const double d = parse_length(cc_d);
      const auto prof = piezo_profile(m, sol, k);
      ModeGeometry geom;
      geom.A = cc_area * 1e-12;
      geom.k = k;
      const double phi0 = zero_point_set(m, geom).phi0->second;
      ChargeQubitParams p{0.0, constants::ueV, l, d};
      const auto g = g_charge(p, phi0, k, std::abs(prof.F(k * d)));
      write_output(cc_out, fmt("{\n  \"g_ch\": %.6g,\n  \"g_eff\": %.6g,\n"
                               "  \"F_kd\": %.6g,\n  \"lambda\": %.6g\n}\n",
                               g.g_ch, g.g_eff, std::abs(prof.F(k * d)), lam));
      return 0;
    }
    if (cp_spin->parsed()) {
      const auto& m = get(cat, sp_mat);
      const auto sol = solve_110(m);
      const double lam = parse_length(sp_lam);
      const double k = 2 * M_PI / lam;
      const double d = parse_length(sp_d), l = parse_length(sp_l);
      const auto prof = piezo_profile(m, sol, k);
      ModeGeometry geom;
      geom.A = sp_area * 1e-12;
      geom.k = k;
      const double phi0 = zero_point_set(m, geom).phi0->second;
      const auto spec = dqd_spectrum(sp_tc * constants::ueV, sp_eps * constants::ueV,
                                     sp_delta * constants::ueV);
      SpinQubitParams p;
      p.t_c = sp_tc * constants::ueV;
      p.epsilon = sp_eps * constants::ueV;
      p.Delta = sp_delta * constants::ueV;
      p.l = l;
      p.d = d;
      p.eta_geo = 2.0 * std::sin(M_PI * l / lam);
      const double g = g_spin(p, spec, phi0, k, std::abs(prof.F(k * d)));
      write_output(sp_out,
                   fmt("{\n  \"g_qd\": %.6g,\n  \"kappa0_kappa1\": %.6g,\n"
                       "  \"omega0_ueV\": %.6g,\n  \"sensitivity\": %.6g\n}\n",
                       g, spec.kappa(0) * spec.kappa(1), spec.omega0 / constants::ueV,
                       charge_noise_sensitivity(p.t_c, p.epsilon, p.Delta)));
      return 0;
    }
    if (cp_ion->parsed()) {
      const auto& m = get(cat, io_mat);
      const double fc = parse_freq(io_fc);
      const double v_s = io_vs > 0 ? io_vs : resolve_velocity(m);
      const double lam = v_s / fc;
      const double k = 2 * M_PI / lam;
      if (!m.e_max || !m.eps_rel)
        throw std::runtime_error("material '" + m.name + "' has no piezoelectric bounds");
      const double U0 =
          std::sqrt(constants::hbar / (2.0 * m.density * v_s * io_area * 1e-12));
      const double phi0 = *m.e_max / (m.eps_rel->first * constants::eps0) * U0;
      IonParams p;
      p.charge = constants::elementary_charge;
      p.mass = io_mass * constants::atomic_mass_unit;
      p.omega_t = 2 * M_PI * io_trap * 1e6;
      p.d = parse_length(io_d);
      write_output(io_out,
                   fmt("{\n  \"g_ion\": %.6g,\n  \"T2\": %.6g,\n  \"lambda\": %.6g,\n"
                       "  \"vacuum_decay\": %.6g\n}\n",
                       g_ion(p, phi0, k), ion_T2(p.d), lam, vacuum_decay(k, p.d)));
      return 0;
    }
    if (cp_nv->parsed()) {
      const auto& m = get(cat, nv_mat);
      ModeGeometry geom;
      geom.A = nv_area * 1e-12;
      const auto z = zero_point_set(m, geom);
      if (!z.B0) throw std::runtime_error("material '" + m.name + "' is not piezomagnetic");
      NVParams p;
      p.gamma_nv = 2 * M_PI * 28e9;
      p.d = 10e-9;
      write_output(nv_out, fmt("{\n  \"g_nv\": %.6g,\n  \"B0_uT\": %.6g\n}\n",
                               g_nv(p, *z.B0), *z.B0 * 1e6));
      return 0;
    }
    if (coop_tab->parsed()) {
      write_output(coop_out, coop_table_csv(coop_table(cat)));
      return 0;
    }
    if (tr_run->parsed()) {
      const double kgd = 1.0;  // protocol expressed in units of kappa_gd
      PulseSpec g1, g2;
      if (tp == "optimal") {
        std::tie(g1, g2) = optimal_pulse(kgd, 20.0 / kgd);
      } else {
        g1.kind = PulseSpec::Kind::constant;
        g1.g1 = kgd;
        g1.duration = 16.0 / kgd;
        g2 = g1;
      }
      NoiseSpec noise;
      noise.kappa_gd = kgd;
      noise.kappa_bd = tr_eps * kgd;
      noise.gamma_deph = tr_gamma * kgd;
      noise.sigma_nuc = tr_sigma * kgd;
      noise.seed = tr_seed;
      const cxd al(1 / std::sqrt(2.0), 0), be(-1 / std::sqrt(2.0), 0);
      HilbertSpec space{2, 2, 2};
      McResult mc;
      if (tr_sigma > 0.0 || tr_runs > 1) {
        const std::pair<PulseSpec, PulseSpec> pp{g1, g2};
        mc = mc_transfer(noise, tr_runs, tr_seed, al, be, space, {}, 0, &pp);
      } else {
        auto r = transfer_run(g1, g2, noise, 0, 0, al, be, space);
        mc.mean = r.fidelity;
        mc.per_run = {r.fidelity};
        if (!tr_traj_out.empty()) write_output(tr_traj_out, trajectory_csv(r.traj));
      }
      write_output(tr_out, mc_summary_json(mc, tr_sigma, tr_eps, int(mc.per_run.size()),
                                           tr_seed));
      return 0;
    }
    if (app.got_subcommand("validate")) return run_validate(cat);

    std::fprintf(stderr, "error: no action selected (see --help)\n");
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
