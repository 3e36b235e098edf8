#ifndef SAWQED_DYNAMICS_HPP
#define SAWQED_DYNAMICS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace sawqed {

using cxd = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b);

struct HilbertSpec {
  int node_count = 2;
  int qubit_dim = 2;    // 3 enables the |2> leakage level
  int fock_cutoff = 2;  // per node
  int fock_dim() const { return fock_cutoff + 1; }
  long total_dim() const;
  void validate() const;  // dimension guard (<= 4096)
};

enum class HamiltonianVariant { JC, FullDQD, Longitudinal, DrivenJC };
enum class DephasingKind { sz, excited_projector };

struct HamiltonianSpec {
  HamiltonianVariant variant = HamiltonianVariant::JC;
  double g = 0;                           // JC / longitudinal coupling [rad/s]
  double t_c = 0, epsilon = 0, Delta = 0; // FullDQD three-level parameters [J]
  double coupling_scale = 0;              // FullDQD: eta_geo e phi0 [J]
  double delta = 0;                       // qubit-cavity detuning [rad/s]
  double drive_amp = 0, drive_freq = 0;   // DrivenJC: Xi cos(w t)(a + a^dag)
};

struct NoiseSpec {
  double kappa_gd = 0, kappa_bd = 0;  // cascaded-channel rates [rad/s]
  double gamma_deph = 0;              // Markovian dephasing rate [rad/s]
  double sigma_nuc = 0;               // quasi-static Gaussian width [rad/s]
  std::uint64_t seed = 0;
  DephasingKind deph_kind = DephasingKind::sz;
  void validate() const;
};

struct PulseSpec {
  enum class Kind { constant, symmetric_wavepacket, samples };
  Kind kind = Kind::constant;
  double g1 = 0;           // amplitude for the constant kind [rad/s]
  double duration = 0;     // total span [s]; sampled kinds run on [-T, T]
  double dt = 0;
  std::vector<double> t, g;  // samples (monotone t)
  bool amplitude_capped = false;

  double eval(double time) const;  // piecewise-linear, clamped at the ends
};

/// g1(t) shaping the emitted phonon into a time-symmetric sech wavepacket
/// (dark-state inversion of the emission equations). horizon = total
/// protocol duration, >= 10/kappa_gd; samples span [-horizon/2, horizon/2].
PulseSpec optimal_pulse_emit(double kappa_gd, double horizon);
/// g2(t) = g1(-t): the sample array reversed.
PulseSpec time_reversed(PulseSpec p);
/// Both halves of the protocol in one call.
std::pair<PulseSpec, PulseSpec> optimal_pulse(double kappa_gd, double horizon);

/// Right-hand side rho' = L(t) rho in superoperator form. Column-major
/// vec() convention throughout.
struct Liouvillian {
  long dim = 0;  // Hilbert-space dimension
  Eigen::SparseMatrix<cxd> L0;
  std::vector<std::pair<std::function<double(double)>, Eigen::SparseMatrix<cxd>>> Lt;

  void apply(double t, const VectorXcd& x, VectorXcd& y) const;
  MatrixXcd dense(double t) const;
  bool time_dependent() const { return !Lt.empty(); }
};

/// Superoperator pieces.
Eigen::SparseMatrix<cxd> commutator_superop(const MatrixXcd& H);  // -i[H, .]
Eigen::SparseMatrix<cxd> dissipator_superop(const MatrixXcd& L, double rate);

/// Operator kit on a one- or two-node qubit (x) fock space, ordering
/// q1 (x) f1 [(x) q2 (x) f2].
struct SpaceOps {
  HilbertSpec spec;
  std::vector<MatrixXcd> a, n, sm, sp, sz, proj_excited, proj_leak;
  explicit SpaceOps(const HilbertSpec& s);
  VectorXcd basis_state(const std::vector<int>& levels) const;
};

/// Assembles the Liouvillian for a single-node spec. JC and Longitudinal
/// use the App-G-style channel kappa D[a] with kappa = kappa_gd + kappa_bd;
/// dephasing per NoiseSpec::deph_kind.
Liouvillian build_liouvillian(const HamiltonianSpec& h, const NoiseSpec& noise,
                              const HilbertSpec& space);

/// Cascaded two-node master equation: coherent cascade term
/// i kappa_gd (a1^dag a2 - a2^dag a1), collective jump 2 kappa_gd D[a1+a2],
/// local 2 kappa_bd D[a_i], detunings delta_i S_i^z, dephasing
/// gamma_deph D[S_i^z].
Liouvillian build_cascaded(const NoiseSpec& noise, double delta1, double delta2,
                           const HilbertSpec& space, const PulseSpec& pulse1,
                           const PulseSpec& pulse2, const SpaceOps& ops);

struct Trajectory {
  std::vector<double> t;
  std::vector<double> s1z, s2z, n1, n2, fidelity, leakage;
  double max_trace_dev = 0;
  double max_herm_dev = 0;
  double min_eigenvalue = 0;
};

struct IntegrationOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  int grid_points = 201;
  int checkpoints = 10;  // positivity/trace checks
};

/// Adaptive embedded Runge-Kutta 4(5), recording observables on a uniform
/// grid. target may be empty (fidelity column then stays 0).
Trajectory integrate(const Liouvillian& lv, const MatrixXcd& rho0, double t0,
                     double t1, const SpaceOps& ops, const VectorXcd& target,
                     const IntegrationOptions& opt);

/// Propagator-based evolution for time-independent systems (exact
/// superoperator exponential per grid step).
Trajectory propagate_static(const Liouvillian& lv, const MatrixXcd& rho0, double t0,
                            double t1, const SpaceOps& ops, const VectorXcd& target,
                            int grid_points);

struct TransferResult {
  double fidelity = 0;
  Trajectory traj;
};

/// Cascaded state transfer of (alpha|0> + beta|1>)_1 -> node 2; returns
/// the overlap with the target at the final time.
TransferResult transfer_run(const PulseSpec& g1, const PulseSpec& g2,
                            const NoiseSpec& noise, double delta1, double delta2,
                            cxd alpha, cxd beta, const HilbertSpec& space,
                            const IntegrationOptions& opt = {});

struct McResult {
  double mean = 0;
  double stderr_mean = 0;
  std::vector<double> per_run;
};

/// Quasi-static Overhauser averaging: per-run detunings drawn
/// Gaussian(0, sigma_nuc) from a counter-based generator keyed on
/// (seed, run index); runs are order-independent and parallelized.
/// Defaults to the optimal pulse pair on a 20/kappa_gd horizon; pass an
/// explicit pair to average a different protocol.
McResult mc_transfer(const NoiseSpec& noise, int n_runs, std::uint64_t seed,
                     cxd alpha, cxd beta, const HilbertSpec& space,
                     const IntegrationOptions& opt = {}, int threads = 0,
                     const std::pair<PulseSpec, PulseSpec>* pulses = nullptr);

/// Markovian-dephasing variant; pulses either the optimal pair or the
/// constant protocol g(t >= 0) = kappa_gd.
double markovian_transfer(const PulseSpec& g1, const PulseSpec& g2,
                          double gamma_deph, double eps_ratio, double kappa_gd,
                          cxd alpha, cxd beta, const HilbertSpec& space,
                          const IntegrationOptions& opt = {});

struct FullVsJcParams {
  double t_c_ueV = 10.0;
  double epsilon_ueV = -7.0;
  double Delta_ueV = 1.0;
  double coupling_scale_ueV = 5.2e-2;  // eta_geo e phi0
  double kappa_over_g = 0.5;           // kappa = g_QD / 2
  int fock_cutoff = 2;
  double rabi_periods = 4.0;  // horizon in vacuum-Rabi periods
  int grid_points = 401;
};

struct FullVsJcReport {
  std::vector<double> t, sz_full, sz_jc, n_full, n_jc, leak;
  double g_qd = 0;          // [rad/s]
  double max_leakage = 0;
  double supnorm_sz = 0;
};

/// Exact three-level-per-node model against its Jaynes-Cummings reduction.
FullVsJcReport full_vs_jc_single_node(const FullVsJcParams& p = {});

/// Norm of U4 U3 U2 U1 - exp(-i 4 tau H_eff) for the echo sequence,
/// H_eff = (g/2)(S+ a + S- a^dag).
double hahn_echo_error(double tau, double delta, double g, int fock_cutoff = 2);

/// Coupling extracted from the first population minimum under the
/// stroboscopic echo evolution; ~ g/2 for small tau.
double hahn_echo_effective_coupling(double delta, double g, double tau,
                                    int fock_cutoff = 2);

struct AdiabaticReport {
  double supnorm_p1 = 0;      // |p1_full - exp(-kt t)| over the run
  double p_gd_jump = 0;       // first-jump-good probability (full model)
  double p_gd_analytic = 0;   // kt_gd / gamma_eff
  double p_suc_formula = 0;   // 1/((1+eps)(1+1/4C))
  double kappa_tilde = 0;
  bool regime_ok = true;      // kappa >= 20 g
};

AdiabaticReport adiabatic_elimination_check(double g, double kappa,
                                            double gamma_deph,
                                            double kappa_bd_fraction = 0.0);

std::string trajectory_csv(const Trajectory& traj);
std::string mc_summary_json(const McResult& r, double sigma_nuc, double eps,
                            int n_runs, std::uint64_t seed);

/// Deterministic per-run standard normals (counter-based; Box-Muller over
/// splitmix64 streams).
std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t counter);

}  // namespace sawqed

#endif
