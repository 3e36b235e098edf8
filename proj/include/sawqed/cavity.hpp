#ifndef SAWQED_CAVITY_HPP
#define SAWQED_CAVITY_HPP

#include <string>
#include <vector>

#include "sawqed/materials.hpp"

namespace sawqed {

struct MirrorSpec {
  int N = 0;                 // grooves per mirror
  double h_over_lambda = 0;  // normalized groove depth
  double w_over_p = 0.5;     // groove width over pitch
  std::string material_name;
  void validate() const;
};

struct CavityBudget {
  double f_c = 0;       // [Hz]
  double lambda_c = 0;  // [m]
  double r_s = 0;       // single-groove reflection
  double R_total = 0;   // tanh(N r_s)
  double L_p = 0;       // mirror penetration depth [m]
  double L_c = 0;       // effective cavity length [m]
  double N_eff = 0;     // L_c / lambda_c
  double Q_r = 0, Q_bk = 0, Q_m = 0, Q = 0;
  double kappa_gd = 0, kappa_bd = 0, kappa = 0;  // [rad/s]
  double ratio_gd_bd = 0;
  double mode_spacing_rel = 0;  // delta f / f_c between modes
  double bandwidth_rel = 0;     // mirror stop-band, 2 r_s / pi
  double A = 0;                 // mode area [m^2]
};

/// Bragg condition f_c = v_s / (2 p).
double center_frequency(const MaterialRecord& m, double pitch);

/// |r_s| = C1 (h/lambda) sin(pi w/p) + C2 (h/lambda)^2 cos(pi w/p)
double groove_reflection(const MaterialRecord& m, const MirrorSpec& spec);

/// Full resonator budget for gap D [m] and transverse confinement
/// L_trans [m] at center frequency f_c.
CavityBudget budget(const MaterialRecord& m, const MirrorSpec& spec, double D,
                    double L_trans, double f_c);

struct SweepRow {
  double h_over_lambda;
  CavityBudget b;
};

std::vector<SweepRow> q_sweep(const MaterialRecord& m, int N,
                              const std::vector<double>& h_grid, double D,
                              double w_over_p, double f_c, double L_trans);

/// Smallest grid h where bulk conversion is the single largest loss
/// (1/Q_bk >= max(1/Q_r, 1/Q_m)); returns <0 when no such point exists.
double bulk_limit_onset(const std::vector<SweepRow>& sweep);

std::string sweep_csv(const std::vector<SweepRow>& sweep);

struct DesignResult {
  MirrorSpec spec;
  CavityBudget budget;
};

/// Smallest-N (N, h) grid point with Q >= target_Q and
/// kappa_gd/kappa_bd >= min_ratio; ties break to smaller N, then smaller h.
/// Throws std::runtime_error describing the best found point if infeasible.
DesignResult design_search(const MaterialRecord& m, double f_c, double target_Q,
                           double min_ratio, double D, double w_over_p,
                           double L_trans);

}  // namespace sawqed

#endif
