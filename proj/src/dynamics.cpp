#include "sawqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <atomic>
#include <thread>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "sawqed/constants.hpp"
#include "sawqed/couplings.hpp"

namespace sawqed {

using namespace constants;

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

long HilbertSpec::total_dim() const {
  long d = 1;
  for (int n = 0; n < node_count; ++n) d *= long(qubit_dim) * fock_dim();
  return d;
}

void HilbertSpec::validate() const {
  if (node_count != 1 && node_count != 2)
    throw std::invalid_argument("hilbert space: node_count must be 1 or 2");
  if (qubit_dim != 2 && qubit_dim != 3)
    throw std::invalid_argument("hilbert space: qubit_dim must be 2 or 3");
  if (fock_cutoff < 1) throw std::invalid_argument("hilbert space: fock_cutoff must be >= 1");
  if (total_dim() > 4096)
    throw std::invalid_argument("hilbert space: total dimension exceeds 4096");
}

void NoiseSpec::validate() const {
  if (kappa_gd < 0 || kappa_bd < 0 || gamma_deph < 0 || sigma_nuc < 0)
    throw std::invalid_argument("noise: all rates must be >= 0");
}

namespace {

MatrixXcd destroy_op(int nf) {
  MatrixXcd a = MatrixXcd::Zero(nf, nf);
  for (int n = 1; n < nf; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

MatrixXcd qubit_lower(int nq) {
  MatrixXcd s = MatrixXcd::Zero(nq, nq);
  s(0, 1) = 1.0;  // |0><1|
  return s;
}

MatrixXcd qubit_sz(int nq) {
  MatrixXcd s = MatrixXcd::Zero(nq, nq);
  s(0, 0) = -0.5;
  s(1, 1) = 0.5;
  return s;
}

}  // namespace

SpaceOps::SpaceOps(const HilbertSpec& s) : spec(s) {
  spec.validate();
  const int nq = s.qubit_dim, nf = s.fock_dim();
  const MatrixXcd aq = destroy_op(nf);
  const MatrixXcd Iq = MatrixXcd::Identity(nq, nq);
  const MatrixXcd If = MatrixXcd::Identity(nf, nf);
  const MatrixXcd node = MatrixXcd::Identity(nq * nf, nq * nf);

  auto place = [&](const MatrixXcd& op, int node_idx) {
    if (s.node_count == 1) return op;
    return node_idx == 0 ? kron(op, node) : kron(node, op);
  };
  MatrixXcd pe = MatrixXcd::Zero(nq, nq);
  pe(1, 1) = 1.0;
  MatrixXcd pl = MatrixXcd::Zero(nq, nq);
  if (nq == 3) pl(2, 2) = 1.0;

  for (int i = 0; i < s.node_count; ++i) {
    a.push_back(place(kron(Iq, aq), i));
    n.push_back(place(kron(Iq, aq.adjoint() * aq), i));
    sm.push_back(place(kron(qubit_lower(nq), If), i));
    sp.push_back(sm.back().adjoint());
    sz.push_back(place(kron(qubit_sz(nq), If), i));
    proj_excited.push_back(place(kron(pe, If), i));
    proj_leak.push_back(place(kron(pl, If), i));
  }
}

VectorXcd SpaceOps::basis_state(const std::vector<int>& levels) const {
  const int nf = spec.fock_dim();
  if (int(levels.size()) != 2 * spec.node_count)
    throw std::invalid_argument("basis_state: need (qubit, fock) per node");
  long idx = 0;
  for (int i = 0; i < spec.node_count; ++i) {
    idx = idx * spec.qubit_dim + levels[2 * i];
    idx = idx * nf + levels[2 * i + 1];
  }
  VectorXcd v = VectorXcd::Zero(spec.total_dim());
  v(idx) = 1.0;
  return v;
}

namespace {

void append_triplets(std::vector<Eigen::Triplet<cxd>>& trip, const MatrixXcd& dense,
                     long row0, long col0, cxd scale) {
  for (Eigen::Index j = 0; j < dense.cols(); ++j)
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
      if (dense(i, j) != cxd(0.0, 0.0))
        trip.emplace_back(row0 + i, col0 + j, scale * dense(i, j));
}

// vec(A rho B) = (B^T kron A) vec(rho)
Eigen::SparseMatrix<cxd> super_sandwich(const MatrixXcd& A, const MatrixXcd& B,
                                        cxd scale) {
  const long d = A.rows();
  std::vector<Eigen::Triplet<cxd>> trip;
  const MatrixXcd Bt = B.transpose();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (Bt(i, j) != cxd(0.0, 0.0)) append_triplets(trip, A, i * d, j * d, scale * Bt(i, j));
  Eigen::SparseMatrix<cxd> out(d * d, d * d);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::SparseMatrix<cxd> super_left(const MatrixXcd& A, cxd scale) {
  return super_sandwich(A, MatrixXcd::Identity(A.rows(), A.cols()), scale);
}

Eigen::SparseMatrix<cxd> super_right(const MatrixXcd& B, cxd scale) {
  return super_sandwich(MatrixXcd::Identity(B.rows(), B.cols()), B, scale);
}

}  // namespace

Eigen::SparseMatrix<cxd> commutator_superop(const MatrixXcd& H) {
  const double herm = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("commutator_superop: H is not Hermitian");
  return super_left(H, cxd(0, -1)) + super_right(H, cxd(0, 1));
}

Eigen::SparseMatrix<cxd> dissipator_superop(const MatrixXcd& L, double rate) {
  const MatrixXcd LdL = L.adjoint() * L;
  return super_sandwich(L, L.adjoint(), rate) + super_left(LdL, -0.5 * rate) +
         super_right(LdL, -0.5 * rate);
}

void Liouvillian::apply(double t, const VectorXcd& x, VectorXcd& y) const {
  y.noalias() = L0 * x;
  for (const auto& [coeff, Lk] : Lt) y.noalias() += coeff(t) * (Lk * x);
}

MatrixXcd Liouvillian::dense(double t) const {
  MatrixXcd out = MatrixXcd(L0);
  for (const auto& [coeff, Lk] : Lt) out += coeff(t) * MatrixXcd(Lk);
  return out;
}

// ---------------------------------------------------------------------------
// pulses

double PulseSpec::eval(double time) const {
  switch (kind) {
    case Kind::constant:
      return time >= 0.0 ? g1 : 0.0;
    case Kind::symmetric_wavepacket:
    case Kind::samples: {
      if (t.empty()) return 0.0;
      if (time <= t.front()) return g.front();
      if (time >= t.back()) return g.back();
      const auto it = std::upper_bound(t.begin(), t.end(), time);
      const size_t i = size_t(it - t.begin());
      const double w = (time - t[i - 1]) / (t[i] - t[i - 1]);
      return g[i - 1] + w * (g[i] - g[i - 1]);
    }
  }
  return 0.0;
}

PulseSpec optimal_pulse_emit(double kappa_gd, double horizon) {
  if (!(kappa_gd > 0)) throw std::invalid_argument("optimal_pulse: kappa_gd must be > 0");
  if (!(horizon >= 10.0 / kappa_gd))
    throw std::invalid_argument("optimal_pulse: horizon must be >= 10/kappa_gd");
  PulseSpec p;
  p.kind = PulseSpec::Kind::symmetric_wavepacket;
  p.duration = horizon;
  p.dt = 0.01 / kappa_gd;
  const double T = 0.5 * horizon;
  const long n = lround(std::ceil(2.0 * T / p.dt)) + 1;
  p.t.resize(n);
  p.g.resize(n);

  // target output mode phi(t) ~ sech(kappa_gd t / 2), unit norm
  const double ks = 0.5 * kappa_gd;
  auto phi2 = [&](double tt) {
    const double s = 1.0 / std::cosh(ks * tt);
    return 0.25 * kappa_gd * s * s;  // |phi|^2
  };
  auto cp = [&](double tt) {
    return (1.0 / std::cosh(ks * tt)) / (2.0 * std::sqrt(2.0));
  };

  // cumulative emitted fraction by the trapezoid rule, then the dark-state
  // inversion g1 = (cp' + kappa cp) / s_e
  std::vector<double> E(n);
  double acc = 0.0;
  // open the window far enough left that the tail below t[0] is counted
  {
    const double t0 = -T;
    const int pre = 400;
    const double hpre = (10.0 / kappa_gd) / pre;
    double prev = phi2(t0 - 10.0 / kappa_gd);
    for (int i = 1; i <= pre; ++i) {
      const double cur = phi2(t0 - 10.0 / kappa_gd + i * hpre);
      acc += 0.5 * (prev + cur) * hpre;
      prev = cur;
    }
  }
  for (long i = 0; i < n; ++i) {
    p.t[i] = -T + 2.0 * T * double(i) / double(n - 1);
    if (i > 0) acc += 0.5 * (phi2(p.t[i - 1]) + phi2(p.t[i])) * (p.t[i] - p.t[i - 1]);
    E[i] = acc;
  }

  const double cap = 10.0 * kappa_gd;
  double frozen = -1.0;
  for (long i = 0; i < n; ++i) {
    if (E[i] > 0.999) {  // truncate the inversion near full emission
      if (frozen < 0.0) frozen = (i > 0) ? p.g[i - 1] : 0.0;
      p.g[i] = frozen;
      continue;
    }
    const double h = p.dt;
    const double dcp = (cp(p.t[i] + h) - cp(p.t[i] - h)) / (2.0 * h);
    const double c = cp(p.t[i]);
    const double se2 = std::max(1.0 - E[i] - c * c, 1e-18);
    double gi = (dcp + kappa_gd * c) / std::sqrt(se2);
    if (gi > cap) {
      gi = cap;
      p.amplitude_capped = true;
    }
    p.g[i] = std::max(gi, 0.0);
  }
  return p;
}

PulseSpec time_reversed(PulseSpec p) {
  std::reverse(p.g.begin(), p.g.end());
  for (auto& tt : p.t) tt = -tt;
  std::reverse(p.t.begin(), p.t.end());
  return p;
}

std::pair<PulseSpec, PulseSpec> optimal_pulse(double kappa_gd, double horizon) {
  PulseSpec g1 = optimal_pulse_emit(kappa_gd, horizon);
  PulseSpec g2 = time_reversed(g1);
  return {std::move(g1), std::move(g2)};
}

// ---------------------------------------------------------------------------
// builders

Liouvillian build_liouvillian(const HamiltonianSpec& h, const NoiseSpec& noise,
                              const HilbertSpec& space) {
  space.validate();
  noise.validate();
  if (space.node_count != 1)
    throw std::invalid_argument("build_liouvillian: single-node variants only; "
                                "use build_cascaded for two nodes");
  SpaceOps ops(space);
  const long d = space.total_dim();
  Liouvillian lv;
  lv.dim = d;

  MatrixXcd H;
  const double kappa = noise.kappa_gd + noise.kappa_bd;
  switch (h.variant) {
    case HamiltonianVariant::JC:
    case HamiltonianVariant::DrivenJC:
      H = h.delta * ops.sz[0] + h.g * (ops.sp[0] * ops.a[0] + ops.sm[0] * ops.a[0].adjoint());
      break;
    case HamiltonianVariant::Longitudinal:
      H = h.delta * ops.sz[0] +
          h.g * (ops.a[0] + ops.a[0].adjoint()) * ops.proj_excited[0];
      break;
    case HamiltonianVariant::FullDQD: {
      if (space.qubit_dim != 3)
        throw std::invalid_argument("FullDQD needs qubit_dim == 3");
      const auto spec = dqd_spectrum(h.t_c, h.epsilon, h.Delta);
      const int nq = 3, nf = space.fock_dim();
      MatrixXcd Hq = MatrixXcd::Zero(nq, nq);
      MatrixXcd P = MatrixXcd::Zero(nq, nq);
      for (int k = 0; k < nq; ++k) {
        Hq(k, k) = spec.energies[k] / hbar;
        for (int l = 0; l < nq; ++l) P(k, l) = spec.kappa(k) * spec.kappa(l);
      }
      const double omega_c = spec.omega0 / hbar + h.delta;
      const MatrixXcd aq = destroy_op(nf);
      H = kron(Hq, MatrixXcd::Identity(nf, nf)) +
          omega_c * kron(MatrixXcd::Identity(nq, nq), aq.adjoint() * aq) +
          (h.coupling_scale / hbar) * kron(P, aq + aq.adjoint());
      break;
    }
  }
  const double hermdev = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (hermdev > 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff()))
    throw std::logic_error("assembled Hamiltonian lost Hermiticity");

  lv.L0 = commutator_superop(H);
  if (kappa > 0) lv.L0 += dissipator_superop(ops.a[0], kappa);
  if (noise.gamma_deph > 0) {
    const MatrixXcd& L = noise.deph_kind == DephasingKind::sz ? ops.sz[0]
                                                              : ops.proj_excited[0];
    lv.L0 += dissipator_superop(L, noise.gamma_deph);
  }
  if (h.variant == HamiltonianVariant::DrivenJC && h.drive_amp != 0.0) {
    const MatrixXcd X = ops.a[0] + ops.a[0].adjoint();
    auto sup = commutator_superop(X);
    const double amp = h.drive_amp, w = h.drive_freq;
    lv.Lt.emplace_back([amp, w](double t) { return amp * std::cos(w * t); }, sup);
  }
  return lv;
}

Liouvillian build_cascaded(const NoiseSpec& noise, double delta1, double delta2,
                           const HilbertSpec& space, const PulseSpec& pulse1,
                           const PulseSpec& pulse2, const SpaceOps& ops) {
  space.validate();
  noise.validate();
  if (space.node_count != 2)
    throw std::invalid_argument("build_cascaded: two-node space required");
  Liouvillian lv;
  lv.dim = space.total_dim();

  const cxd I(0, 1);
  MatrixXcd H0 = delta1 * ops.sz[0] + delta2 * ops.sz[1];
  H0 += I * noise.kappa_gd *
        (ops.a[0].adjoint() * ops.a[1] - ops.a[1].adjoint() * ops.a[0]);
  lv.L0 = commutator_superop(H0);
  if (noise.kappa_gd > 0)
    lv.L0 += dissipator_superop(ops.a[0] + ops.a[1], 2.0 * noise.kappa_gd);
  if (noise.kappa_bd > 0)
    for (int i = 0; i < 2; ++i)
      lv.L0 += dissipator_superop(ops.a[i], 2.0 * noise.kappa_bd);
  if (noise.gamma_deph > 0)
    for (int i = 0; i < 2; ++i) {
      const MatrixXcd& L = noise.deph_kind == DephasingKind::sz ? ops.sz[i]
                                                                : ops.proj_excited[i];
      lv.L0 += dissipator_superop(L, noise.gamma_deph);
    }

  const MatrixXcd V1 = ops.sp[0] * ops.a[0] + ops.sm[0] * ops.a[0].adjoint();
  const MatrixXcd V2 = ops.sp[1] * ops.a[1] + ops.sm[1] * ops.a[1].adjoint();
  PulseSpec p1 = pulse1, p2 = pulse2;
  lv.Lt.emplace_back([p1](double t) { return p1.eval(t); }, commutator_superop(V1));
  lv.Lt.emplace_back([p2](double t) { return p2.eval(t); }, commutator_superop(V2));
  return lv;
}

// ---------------------------------------------------------------------------
// integration

namespace {

struct Recorder {
  const SpaceOps& ops;
  const VectorXcd& target;
  Trajectory traj;
  int check_stride = 1;
  int count = 0;

  void record(double t, const MatrixXcd& rho) {
    traj.t.push_back(t);
    auto expval = [&rho](const MatrixXcd& op) { return (op * rho).trace().real(); };
    traj.s1z.push_back(expval(ops.sz[0]));
    traj.n1.push_back(expval(ops.n[0]));
    if (ops.spec.node_count == 2) {
      traj.s2z.push_back(expval(ops.sz[1]));
      traj.n2.push_back(expval(ops.n[1]));
    } else {
      traj.s2z.push_back(0.0);
      traj.n2.push_back(0.0);
    }
    double leak = expval(ops.proj_leak[0]);
    if (ops.spec.node_count == 2) leak += expval(ops.proj_leak[1]);
    traj.leakage.push_back(leak);
    traj.fidelity.push_back(target.size() == rho.rows()
                                ? (target.adjoint() * rho * target)(0, 0).real()
                                : 0.0);
    if (count % check_stride == 0) {
      traj.max_trace_dev =
          std::max(traj.max_trace_dev, std::abs(rho.trace().real() - 1.0));
      traj.max_herm_dev =
          std::max(traj.max_herm_dev, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                                  Eigen::EigenvaluesOnly);
      traj.min_eigenvalue = std::min(traj.min_eigenvalue, es.eigenvalues().minCoeff());
    }
    ++count;
  }
};

// Dormand-Prince 5(4) pair
struct Rk45 {
  const Liouvillian& lv;
  double rtol, atol;
  VectorXcd k1, k2, k3, k4, k5, k6, k7, ytmp, yerr;
  bool have_k1 = false;

  explicit Rk45(const Liouvillian& l, double rt, double at) : lv(l), rtol(rt), atol(at) {
    const long n = l.L0.rows();
    for (VectorXcd* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &ytmp, &yerr})
      v->resize(n);
  }

  // one accepted step from (t, y); h adapted in place; returns new t
  double step(double& t, VectorXcd& y, double& h, double t_end) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    if (!have_k1) {
      lv.apply(t, y, k1);
      have_k1 = true;
    }
    for (int attempt = 0; attempt < 60; ++attempt) {
      if (t + h > t_end) h = t_end - t;
      ytmp = y + h * (a21 * k1);
      lv.apply(t + h / 5.0, ytmp, k2);
      ytmp = y + h * (a31 * k1 + a32 * k2);
      lv.apply(t + 3.0 * h / 10.0, ytmp, k3);
      ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      lv.apply(t + 4.0 * h / 5.0, ytmp, k4);
      ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      lv.apply(t + 8.0 * h / 9.0, ytmp, k5);
      ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      lv.apply(t + h, ytmp, k6);
      ytmp = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      lv.apply(t + h, ytmp, k7);
      yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double ynorm = std::max(y.cwiseAbs().maxCoeff(), ytmp.cwiseAbs().maxCoeff());
      const double scale = atol + rtol * ynorm;
      const double err = yerr.cwiseAbs().maxCoeff() / scale;
      if (err <= 1.0 || h <= 1e-14 * std::abs(t_end)) {
        t += h;
        y.swap(ytmp);
        k1.swap(k7);  // FSAL
        const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(grow, 0.2, 5.0);
        return t;
      }
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      if (h < 1e-300) throw std::runtime_error("integrate: step-size underflow");
    }
    throw std::runtime_error("integrate: step-size control failed to converge");
  }
};

}  // namespace

Trajectory integrate(const Liouvillian& lv, const MatrixXcd& rho0, double t0,
                     double t1, const SpaceOps& ops, const VectorXcd& target,
                     const IntegrationOptions& opt) {
  const long d = lv.dim;
  VectorXcd y = Eigen::Map<const VectorXcd>(rho0.data(), d * d);
  Rk45 stepper(lv, opt.rtol, opt.atol);
  Recorder rec{ops, target, {}};
  rec.check_stride = std::max(1, opt.grid_points / std::max(1, opt.checkpoints));

  const int ng = std::max(2, opt.grid_points);
  double t = t0;
  double h = (t1 - t0) / 200.0;
  Eigen::Map<MatrixXcd> rho_view(y.data(), d, d);
  rec.record(t, rho_view);
  for (int gi = 1; gi < ng; ++gi) {
    const double t_target = t0 + (t1 - t0) * double(gi) / double(ng - 1);
    while (t < t_target - 1e-12 * std::abs(t1 - t0)) {
      stepper.step(t, y, h, t_target);
    }
    new (&rho_view) Eigen::Map<MatrixXcd>(y.data(), d, d);
    rec.record(t, rho_view);
  }
  return rec.traj;
}

Trajectory propagate_static(const Liouvillian& lv, const MatrixXcd& rho0, double t0,
                            double t1, const SpaceOps& ops, const VectorXcd& target,
                            int grid_points) {
  if (lv.time_dependent())
    throw std::invalid_argument("propagate_static: Liouvillian is time-dependent");
  const long d = lv.dim;
  const int ng = std::max(2, grid_points);
  const double dt = (t1 - t0) / (ng - 1);
  const MatrixXcd prop = (MatrixXcd(lv.L0) * dt).exp();
  VectorXcd y = Eigen::Map<const VectorXcd>(rho0.data(), d * d);
  Recorder rec{ops, target, {}};
  rec.check_stride = std::max(1, ng / 10);
  Eigen::Map<MatrixXcd> rho_view(y.data(), d, d);
  rec.record(t0, rho_view);
  for (int gi = 1; gi < ng; ++gi) {
    y = prop * y;
    new (&rho_view) Eigen::Map<MatrixXcd>(y.data(), d, d);
    rec.record(t0 + gi * dt, rho_view);
  }
  return rec.traj;
}

// ---------------------------------------------------------------------------
// state transfer

namespace {

double pulse_t_begin(const PulseSpec& p) {
  return p.kind == PulseSpec::Kind::constant ? 0.0 : p.t.front();
}
double pulse_t_end(const PulseSpec& p) {
  return p.kind == PulseSpec::Kind::constant ? p.duration : p.t.back();
}

}  // namespace

TransferResult transfer_run(const PulseSpec& g1, const PulseSpec& g2,
                            const NoiseSpec& noise, double delta1, double delta2,
                            cxd alpha, cxd beta, const HilbertSpec& space,
                            const IntegrationOptions& opt) {
  SpaceOps ops(space);
  Liouvillian lv = build_cascaded(noise, delta1, delta2, space, g1, g2, ops);

  VectorXcd psi0 = alpha * ops.basis_state({0, 0, 0, 0}) + beta * ops.basis_state({1, 0, 0, 0});
  VectorXcd psi_tar =
      alpha * ops.basis_state({0, 0, 0, 0}) + beta * ops.basis_state({0, 0, 1, 0});
  const MatrixXcd rho0 = psi0 * psi0.adjoint();

  const double t0 = std::min(pulse_t_begin(g1), pulse_t_begin(g2));
  const double t1 = std::max(pulse_t_end(g1), pulse_t_end(g2));
  TransferResult out;
  out.traj = integrate(lv, rho0, t0, t1, ops, psi_tar, opt);
  out.fidelity = out.traj.fidelity.back();
  return out;
}

std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t counter) {
  auto splitmix = [](std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ull * (counter + 1));
  const std::uint64_t u1 = splitmix(state);
  const std::uint64_t u2 = splitmix(state);
  const double x1 = (double(u1 >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  const double x2 = double(u2 >> 11) * (1.0 / 9007199254740992.0);
  const double r = std::sqrt(-2.0 * std::log(x1));
  return {r * std::cos(2.0 * M_PI * x2), r * std::sin(2.0 * M_PI * x2)};
}

McResult mc_transfer(const NoiseSpec& noise, int n_runs, std::uint64_t seed,
                     cxd alpha, cxd beta, const HilbertSpec& space,
                     const IntegrationOptions& opt, int threads,
                     const std::pair<PulseSpec, PulseSpec>* pulses) {
  noise.validate();
  if (n_runs < 1) throw std::invalid_argument("mc_transfer: n_runs must be >= 1");
  auto [g1, g2] = pulses ? *pulses : optimal_pulse(noise.kappa_gd, 20.0 / noise.kappa_gd);

  McResult res;
  res.per_run.assign(n_runs, 0.0);
  if (noise.sigma_nuc == 0.0 && n_runs == 1) {
    res.per_run[0] = transfer_run(g1, g2, noise, 0.0, 0.0, alpha, beta, space, opt).fidelity;
  } else {
    int nt = threads > 0 ? threads
                         : int(std::min<unsigned>(std::thread::hardware_concurrency(), 8));
    nt = std::max(1, std::min(nt, n_runs));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int run = next.fetch_add(1);
        if (run >= n_runs) break;
        auto [z1, z2] = gaussian_pair(seed, std::uint64_t(run));
        const double d1 = noise.sigma_nuc * z1, d2 = noise.sigma_nuc * z2;
        res.per_run[run] =
            transfer_run(g1, g2, noise, d1, d2, alpha, beta, space, opt).fidelity;
      }
    };
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  double sum = 0;
  for (double f : res.per_run) sum += f;  // stable order: by run index
  res.mean = sum / n_runs;
  double var = 0;
  for (double f : res.per_run) var += (f - res.mean) * (f - res.mean);
  res.stderr_mean = n_runs > 1 ? std::sqrt(var / (n_runs - 1.0) / n_runs) : 0.0;
  return res;
}

double markovian_transfer(const PulseSpec& g1, const PulseSpec& g2,
                          double gamma_deph, double eps_ratio, double kappa_gd,
                          cxd alpha, cxd beta, const HilbertSpec& space,
                          const IntegrationOptions& opt) {
  NoiseSpec noise;
  noise.kappa_gd = kappa_gd;
  noise.kappa_bd = eps_ratio * kappa_gd;
  noise.gamma_deph = gamma_deph;
  noise.deph_kind = DephasingKind::sz;
  return transfer_run(g1, g2, noise, 0.0, 0.0, alpha, beta, space, opt).fidelity;
}

// ---------------------------------------------------------------------------
// full-vs-JC comparison

FullVsJcReport full_vs_jc_single_node(const FullVsJcParams& p) {
  const auto spec = dqd_spectrum(p.t_c_ueV * ueV, p.epsilon_ueV * ueV, p.Delta_ueV * ueV);
  const double g_qd = spec.kappa(0) * spec.kappa(1) * p.coupling_scale_ueV * ueV / hbar;
  const double kappa = p.kappa_over_g * g_qd;
  const double t_final = p.rabi_periods * M_PI / g_qd;

  FullVsJcReport rep;
  rep.g_qd = g_qd;

  HilbertSpec full_space{1, 3, p.fock_cutoff};
  HamiltonianSpec hfull;
  hfull.variant = HamiltonianVariant::FullDQD;
  hfull.t_c = p.t_c_ueV * ueV;
  hfull.epsilon = p.epsilon_ueV * ueV;
  hfull.Delta = p.Delta_ueV * ueV;
  hfull.coupling_scale = p.coupling_scale_ueV * ueV;
  NoiseSpec noise;
  noise.kappa_gd = kappa;
  SpaceOps fops(full_space);
  Liouvillian lfull = build_liouvillian(hfull, noise, full_space);
  const MatrixXcd rho_full =
      fops.basis_state({1, 0}) * fops.basis_state({1, 0}).adjoint();
  Trajectory tf = propagate_static(lfull, rho_full, 0.0, t_final, fops, VectorXcd(),
                                   p.grid_points);

  HilbertSpec jc_space{1, 2, p.fock_cutoff};
  HamiltonianSpec hjc;
  hjc.variant = HamiltonianVariant::JC;
  hjc.g = g_qd;
  SpaceOps jops(jc_space);
  Liouvillian ljc = build_liouvillian(hjc, noise, jc_space);
  const MatrixXcd rho_jc = jops.basis_state({1, 0}) * jops.basis_state({1, 0}).adjoint();
  Trajectory tj = propagate_static(ljc, rho_jc, 0.0, t_final, jops, VectorXcd(),
                                   p.grid_points);

  rep.t = tf.t;
  rep.sz_full = tf.s1z;
  rep.n_full = tf.n1;
  rep.leak = tf.leakage;
  rep.sz_jc = tj.s1z;
  rep.n_jc = tj.n1;
  rep.max_leakage = *std::max_element(tf.leakage.begin(), tf.leakage.end());
  double sup = 0;
  for (size_t i = 0; i < tf.s1z.size(); ++i)
    sup = std::max(sup, std::abs(tf.s1z[i] - tj.s1z[i]));
  rep.supnorm_sz = sup;
  return rep;
}

// ---------------------------------------------------------------------------
// Hahn echo

namespace {

MatrixXcd expm_herm(const MatrixXcd& H, double t) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
  VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(cxd(0.0, -es.eigenvalues()(i) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

struct EchoOps {
  MatrixXcd H1, H2, H3, H4, Heff;
  EchoOps(double delta, double g, int fock_cutoff) {
    HilbertSpec s{1, 2, fock_cutoff};
    SpaceOps ops(s);
    const MatrixXcd up = ops.sp[0] * ops.a[0] + ops.sm[0] * ops.a[0].adjoint();
    const MatrixXcd dn = ops.sm[0] * ops.a[0] + ops.sp[0] * ops.a[0].adjoint();
    H1 = delta * ops.sz[0] + g * up;
    H2 = -delta * ops.sz[0] + g * dn;   // pi pulse about x
    H3 = -delta * ops.sz[0] - g * dn;   // then about z
    H4 = delta * ops.sz[0] + g * up;    // then about y
    Heff = 0.5 * g * up;
  }
};

}  // namespace

double hahn_echo_error(double tau, double delta, double g, int fock_cutoff) {
  if (!(tau * std::max(std::abs(delta), g) < 0.1))
    throw std::invalid_argument("hahn_echo_error: tau max(|delta|, g) must stay below 0.1");
  EchoOps e(delta, g, fock_cutoff);
  const MatrixXcd U = expm_herm(e.H4, tau) * expm_herm(e.H3, tau) *
                      expm_herm(e.H2, tau) * expm_herm(e.H1, tau);
  const MatrixXcd Ueff = expm_herm(e.Heff, 4.0 * tau);
  return (U - Ueff).norm();
}

double hahn_echo_effective_coupling(double delta, double g, double tau, int fock_cutoff) {
  EchoOps e(delta, g, fock_cutoff);
  const MatrixXcd Ucycle = expm_herm(e.H4, tau) * expm_herm(e.H3, tau) *
                           expm_herm(e.H2, tau) * expm_herm(e.H1, tau);
  HilbertSpec s{1, 2, fock_cutoff};
  SpaceOps ops(s);
  VectorXcd psi = ops.basis_state({1, 0});
  const MatrixXcd Pe = ops.proj_excited[0];
  // march cycles until past the first population minimum
  double prev2 = 1.0, prev1 = 1.0;
  const int max_cycles = int(2.0 * M_PI / (g * 4.0 * tau)) + 10;
  for (int k = 1; k <= max_cycles; ++k) {
    psi = Ucycle * psi;
    const double pe = (psi.adjoint() * Pe * psi)(0, 0).real();
    if (k >= 2 && prev1 < prev2 && prev1 < pe) {
      // parabolic refinement of the minimum at cycle k-1
      const double denom = prev2 - 2.0 * prev1 + pe;
      const double shift = denom != 0.0 ? 0.5 * (prev2 - pe) / denom : 0.0;
      const double t_min = (double(k - 1) + shift) * 4.0 * tau;
      return 0.5 * M_PI / t_min;  // P_e = cos^2(g_eff t): first zero at pi/2
    }
    prev2 = prev1;
    prev1 = pe;
  }
  throw std::runtime_error("hahn_echo_effective_coupling: no population minimum found");
}

// ---------------------------------------------------------------------------
// adiabatic elimination

AdiabaticReport adiabatic_elimination_check(double g, double kappa, double gamma_deph,
                                            double kappa_bd_fraction) {
  AdiabaticReport rep;
  rep.regime_ok = kappa >= 20.0 * g;
  const double kappa_bd = kappa_bd_fraction * kappa;
  const double kappa_gd = kappa - kappa_bd;
  const double eps = kappa_bd / kappa_gd;
  const double kt = 4.0 * g * g / kappa;
  rep.kappa_tilde = kt;
  const double kt_gd = 4.0 * g * g / (kappa * kappa) * kappa_gd;
  const double gamma_eff = kt + gamma_deph;
  rep.p_gd_analytic = kt_gd / gamma_eff;
  const double C = g * g / (kappa * gamma_deph);
  rep.p_suc_formula = p_success(eps, C);

  // full master equation vs the reduced-model exponential
  HilbertSpec space{1, 2, 2};
  SpaceOps ops(space);
  HamiltonianSpec h;
  h.variant = HamiltonianVariant::JC;
  h.g = g;
  NoiseSpec noise;
  noise.kappa_gd = kappa_gd;
  noise.kappa_bd = kappa_bd;
  noise.gamma_deph = gamma_deph;
  noise.deph_kind = DephasingKind::excited_projector;
  Liouvillian lv = build_liouvillian(h, noise, space);
  const MatrixXcd rho0 =
      ops.basis_state({1, 0}) * ops.basis_state({1, 0}).adjoint();
  const double t_final = 6.0 / kt;
  Trajectory traj = propagate_static(lv, rho0, 0.0, t_final, ops, VectorXcd(), 601);
  double sup = 0;
  for (size_t i = 0; i < traj.t.size(); ++i) {
    const double p1 = traj.s1z[i] + 0.5;  // <P_e> = <S_z> + 1/2
    sup = std::max(sup, std::abs(p1 - std::exp(-kt * traj.t[i])));
  }
  rep.supnorm_p1 = sup;

  // first-jump-good probability from the no-jump (non-Hermitian) evolution;
  // the window must cover the slow gamma_eff tail, not just the kt decay
  const MatrixXcd H = g * (ops.sp[0] * ops.a[0] + ops.sm[0] * ops.a[0].adjoint());
  const MatrixXcd Heff =
      H - cxd(0, 0.5) * (kappa * ops.n[0] + gamma_deph * ops.proj_excited[0]);
  const int nsteps = 200000;
  const double dt = (20.0 / gamma_eff) / nsteps;
  const MatrixXcd U = (cxd(0, -1) * Heff * dt).exp();
  VectorXcd psi = ops.basis_state({1, 0});
  double acc = 0.0;
  double prev = (psi.adjoint() * ops.n[0] * psi)(0, 0).real();
  for (int i = 1; i <= nsteps; ++i) {
    psi = U * psi;
    const double cur = (psi.adjoint() * ops.n[0] * psi)(0, 0).real();
    acc += 0.5 * (prev + cur) * dt;
    prev = cur;
  }
  rep.p_gd_jump = kappa_gd * acc;
  return rep;
}

// ---------------------------------------------------------------------------
// emitters

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,S1z,S2z,n1,n2,fidelity,leakage\n";
  char buf[256];
  for (size_t i = 0; i < traj.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", traj.t[i],
                  traj.s1z[i], traj.s2z[i], traj.n1[i], traj.n2[i], traj.fidelity[i],
                  traj.leakage[i]);
    out << buf;
  }
  return out.str();
}

std::string mc_summary_json(const McResult& r, double sigma_nuc, double eps,
                            int n_runs, std::uint64_t seed) {
  std::ostringstream out;
  char buf[128];
  out << "{\n";
  std::snprintf(buf, sizeof buf, "  \"sigma_nuc\": %.9g,\n", sigma_nuc);
  out << buf;
  std::snprintf(buf, sizeof buf, "  \"eps\": %.9g,\n", eps);
  out << buf;
  out << "  \"n_runs\": " << n_runs << ",\n  \"seed\": " << seed << ",\n";
  std::snprintf(buf, sizeof buf, "  \"F_mean\": %.9g,\n", r.mean);
  out << buf;
  std::snprintf(buf, sizeof buf, "  \"F_stderr\": %.9g,\n", r.stderr_mean);
  out << buf;
  out << "  \"per_run\": [";
  for (size_t i = 0; i < r.per_run.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.9g", i ? ", " : "", r.per_run[i]);
    out << buf;
  }
  out << "]\n}\n";
  return out.str();
}

}  // namespace sawqed
