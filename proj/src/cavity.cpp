#include "sawqed/cavity.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "sawqed/zeropoint.hpp"

namespace sawqed {

void MirrorSpec::validate() const {
  if (N < 1) throw std::invalid_argument("mirror: N must be >= 1");
  if (!(h_over_lambda > 0) || !(h_over_lambda < 0.2))
    throw std::invalid_argument("mirror: h/lambda must lie in (0, 0.2)");
  if (!(w_over_p > 0) || !(w_over_p < 1))
    throw std::invalid_argument("mirror: w/p must lie in (0, 1)");
}

double center_frequency(const MaterialRecord& m, double pitch) {
  if (!(pitch > 0)) throw std::invalid_argument("center_frequency: pitch must be > 0");
  return resolve_velocity(m) / (2.0 * pitch);
}

double groove_reflection(const MaterialRecord& m, const MirrorSpec& spec) {
  spec.validate();
  if (!m.mirror_C1 || !m.mirror_C2)
    throw std::invalid_argument("material '" + m.name +
                                "' has no groove-reflection coefficients");
  const double h = spec.h_over_lambda;
  return *m.mirror_C1 * h * std::sin(M_PI * spec.w_over_p) +
         *m.mirror_C2 * h * h * std::cos(M_PI * spec.w_over_p);
}

CavityBudget budget(const MaterialRecord& m, const MirrorSpec& spec, double D,
                    double L_trans, double f_c) {
  if (D < 0) throw std::invalid_argument("budget: D must be >= 0");
  if (!m.bulk_Cb)
    throw std::invalid_argument("material '" + m.name + "' has no bulk-conversion coefficient");
  const double r_s = groove_reflection(m, spec);
  if (!(r_s > 0))
    throw std::invalid_argument("budget: degenerate mirror (r_s = 0, penetration diverges)");

  CavityBudget b;
  b.f_c = f_c;
  b.lambda_c = resolve_velocity(m) / f_c;
  b.r_s = r_s;
  b.R_total = std::tanh(spec.N * r_s);
  b.L_p = std::tanh((spec.N - 1) * r_s) * b.lambda_c / (4.0 * r_s);
  b.L_c = D + 2.0 * b.L_p;
  b.N_eff = b.L_c / b.lambda_c;
  const double two_pi_neff = 2.0 * M_PI * b.N_eff;
  b.Q_r = two_pi_neff / (1.0 - b.R_total * b.R_total);
  b.Q_bk = two_pi_neff / (*m.bulk_Cb * spec.h_over_lambda * spec.h_over_lambda);
  b.Q_m = m.qm_f_product / (f_c / 1e9);
  b.Q = 1.0 / (1.0 / b.Q_r + 1.0 / b.Q_bk + 1.0 / b.Q_m);
  const double omega_c = 2.0 * M_PI * f_c;
  b.kappa_gd = omega_c / b.Q_r;
  b.kappa_bd = omega_c / b.Q_bk + omega_c / b.Q_m;
  b.kappa = b.kappa_gd + b.kappa_bd;
  b.ratio_gd_bd = b.kappa_gd / b.kappa_bd;
  b.mode_spacing_rel = b.lambda_c / (2.0 * b.L_c);
  b.bandwidth_rel = 2.0 * r_s / M_PI;
  b.A = L_trans * b.L_c;
  return b;
}

std::vector<SweepRow> q_sweep(const MaterialRecord& m, int N,
                              const std::vector<double>& h_grid, double D,
                              double w_over_p, double f_c, double L_trans) {
  std::vector<SweepRow> rows;
  rows.reserve(h_grid.size());
  for (double h : h_grid) {
    if (!(h > 0) || h > 0.1)
      throw std::invalid_argument("q_sweep: grid values must lie in (0, 0.1]");
    MirrorSpec spec{N, h, w_over_p, m.name};
    rows.push_back({h, budget(m, spec, D, L_trans, f_c)});
  }
  return rows;
}

double bulk_limit_onset(const std::vector<SweepRow>& sweep) {
  for (const auto& row : sweep) {
    const double inv_bk = 1.0 / row.b.Q_bk;
    if (inv_bk >= 1.0 / row.b.Q_r && inv_bk >= 1.0 / row.b.Q_m) return row.h_over_lambda;
  }
  return -1.0;
}

std::string sweep_csv(const std::vector<SweepRow>& sweep) {
  std::ostringstream out;
  out << "h_over_lambda,Q,Q_r,Q_bk,Q_m,ratio_gd_bd\n";
  char buf[256];
  for (const auto& r : sweep) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.h_over_lambda,
                  r.b.Q, r.b.Q_r, r.b.Q_bk, r.b.Q_m, r.b.ratio_gd_bd);
    out << buf;
  }
  return out.str();
}

DesignResult design_search(const MaterialRecord& m, double f_c, double target_Q,
                           double min_ratio, double D, double w_over_p,
                           double L_trans) {
  if (!(target_Q > 0) || !(min_ratio > 0))
    throw std::invalid_argument("design_search: targets must be positive");
  DesignResult best{};
  bool feasible = false;
  double best_Q_seen = 0, best_ratio_seen = 0;
  // N rises in unit steps; h spans (0, 10%] at 0.01% resolution
  for (int N = 1; N <= 300 && !feasible; ++N) {
    for (int hi = 1; hi <= 1000; ++hi) {
      const double h = hi * 1e-4;
      MirrorSpec spec{N, h, w_over_p, m.name};
      CavityBudget b = budget(m, spec, D, L_trans, f_c);
      if (b.Q > best_Q_seen) best_Q_seen = b.Q;
      if (b.ratio_gd_bd > best_ratio_seen) best_ratio_seen = b.ratio_gd_bd;
      if (b.Q >= target_Q && b.ratio_gd_bd >= min_ratio) {
        best = {spec, b};
        feasible = true;
        break;  // smallest h at the smallest feasible N
      }
    }
  }
  if (!feasible) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "design targets infeasible (best Q = %.3g, best ratio = %.3g over the grid)",
                  best_Q_seen, best_ratio_seen);
    throw std::runtime_error(msg);
  }
  return best;
}

}  // namespace sawqed
