#include "sawqed/rayleigh.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sawqed/constants.hpp"

namespace sawqed {

namespace {

void require_elastic(const MaterialRecord& m) {
  if (!m.has_elastic())
    throw std::invalid_argument("material '" + m.name +
                                "' has no elastic constants (estimate-only entry)");
}

cplx poly_eval(std::span<const double> c, cplx x) {
  cplx acc = 0.0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

cplx poly_deriv_eval(std::span<const double> c, cplx x) {
  cplx acc = 0.0;
  for (size_t i = c.size(); i-- > 1;) acc = acc * x + double(i) * c[i];
  return acc;
}

}  // namespace

std::vector<cplx> poly_roots(std::span<const double> coeffs) {
  // strip leading zeros of the highest powers
  size_t n = coeffs.size();
  while (n > 1 && coeffs[n - 1] == 0.0) --n;
  if (n <= 1) return {};
  const size_t deg = n - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (size_t i = 0; i + 1 < deg; ++i) comp(i + 1, i) = 1.0;
  for (size_t i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  std::vector<cplx> roots(deg);
  for (size_t i = 0; i < deg; ++i) {
    cplx r = es.eigenvalues()(static_cast<Eigen::Index>(i));
    for (int it = 0; it < 5; ++it) {
      cplx d = poly_deriv_eval(coeffs.first(n), r);
      if (std::abs(d) == 0.0) break;
      cplx step = poly_eval(coeffs.first(n), r) / d;
      r -= step;
      if (std::abs(step) < 1e-12 * (1.0 + std::abs(r))) break;
    }
    roots[i] = r;
  }
  return roots;
}

std::vector<double> velocity_branches_110(const MaterialRecord& m) {
  require_elastic(m);
  const double c11 = *m.c11, c12 = *m.c12, c44 = *m.c44;
  const double c11p = 0.5 * (c11 + c12) + c44;
  const double K = (c11 * c11p - c12 * c12) / (c11 * c11);
  const double cp = c11p / c11;
  const double r = c11 / c44;
  // (1 - r X)(K - X)^2 = X^2 (cp - X), cubic in X = rho c^2 / c11
  const double a0 = K * K;
  const double a1 = -2.0 * K - K * K * r;
  const double a2 = 1.0 + 2.0 * K * r - cp;
  const double a3 = 1.0 - r;
  const double coeffs[4] = {a0, a1, a2, a3};
  std::vector<double> vs;
  for (const cplx& root : poly_roots(coeffs)) {
    if (std::abs(root.imag()) < 1e-9 * (1.0 + std::abs(root.real())) && root.real() > 0.0)
      vs.push_back(std::sqrt(root.real() * c11 / m.density));
  }
  std::sort(vs.begin(), vs.end());
  if (vs.empty())
    throw std::runtime_error("phase-velocity cubic has no positive real root for '" +
                             m.name + "'");
  return vs;
}

double velocity_cubic_residual(const MaterialRecord& m, double X) {
  const double c11 = *m.c11, c12 = *m.c12, c44 = *m.c44;
  const double c11p = 0.5 * (c11 + c12) + c44;
  const double K = (c11 * c11p - c12 * c12) / (c11 * c11);
  const double cp = c11p / c11;
  const double r = c11 / c44;
  const double lhs = (1.0 - r * X) * (K - X) * (K - X);
  const double rhs = X * X * (cp - X);
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

namespace {

// secular quadratic in s = q^2 at dimensionless X; returns the two roots
std::array<cplx, 2> secular_s_roots(double r44, double rP, double rp, double X) {
  const double A = r44;
  const double B = -(r44 * (r44 - X) + (rP - X) - rp * rp);
  const double C = (rP - X) * (r44 - X);
  const cplx disc = std::sqrt(cplx(B * B - 4.0 * A * C, 0.0));
  return {(-B + disc) / (2.0 * A), (-B - disc) / (2.0 * A)};
}

cplx amplitude_ratio(double r44, double rp, double X, cplx q) {
  return rp * q / (r44 - X - q * q);
}

}  // namespace

double secular_residual_110(const MaterialRecord& m, double X, cplx q) {
  const double c11 = *m.c11, c12 = *m.c12, c44 = *m.c44;
  const double r44 = c44 / c11, rp = (c12 + c44) / c11;
  const double rP = 0.5 * (c11 + c12) / c11 + r44;
  const cplx s = q * q;
  const cplx val = (rP - X - r44 * s) * (r44 - X - s) + rp * rp * s;
  return std::abs(val) / (rP * rP);
}

RayleighSolution solve_110(const MaterialRecord& m) {
  require_elastic(m);
  const double c11 = *m.c11, c12 = *m.c12, c44 = *m.c44;
  const double r44 = c44 / c11, rp = (c12 + c44) / c11;
  const double rP = 0.5 * (c11 + c12) / c11 + r44;

  const auto branches = velocity_branches_110(m);
  RayleighSolution sol;
  sol.material_name = m.name;
  bool found = false;
  for (double v : branches) {
    const double X = m.density * v * v / c11;
    auto s = secular_s_roots(r44, rP, rp, X);
    // canonical member of the conjugate pair: Re q > 0, Im q >= 0
    cplx q{};
    bool ok = false;
    for (const cplx& sr : s) {
      cplx cand = std::sqrt(sr);
      if (cand.real() < 0.0) cand = -cand;
      if (cand.real() > 1e-9 && cand.imag() >= 0.0) {
        q = cand;
        ok = true;
      }
    }
    if (!ok) continue;
    sol.v_s = v;
    sol.X = X;
    sol.q = q;
    sol.gamma = amplitude_ratio(r44, rp, X, q);
    if (sol.gamma == sol.q)
      throw std::runtime_error("degenerate amplitude ratio gamma == q for '" + m.name + "'");
    const cplx phase = -(std::conj(sol.gamma) - std::conj(sol.q)) / (sol.gamma - sol.q);
    double phi = -0.5 * std::arg(phase);
    if (phi < 0.0) phi += M_PI;  // branch choice: phi in [0, pi)
    sol.phi = phi;
    found = true;
    break;  // lowest branch admitting decaying roots
  }
  if (!found)
    throw std::runtime_error("no decaying surface branch found for '" + m.name + "'");
  return sol;
}

double boundary_det_110(const MaterialRecord& m, const RayleighSolution& s) {
  const double c11 = *m.c11, c12 = *m.c12, c44 = *m.c44;
  const double r44 = c44 / c11, rp = (c12 + c44) / c11;
  const cplx q1 = s.q, q2 = std::conj(s.q);
  const cplx g1 = amplitude_ratio(r44, rp, s.X, q1);
  const cplx g2 = amplitude_ratio(r44, rp, s.X, q2);
  const double a = c11 / c12;
  const cplx det = (g1 - q1) * (1.0 + a * q2 * g2) - (g2 - q2) * (1.0 + a * q1 * g1);
  // normalize by the largest row scale
  const double rowscale = std::max(std::abs(g1 - q1) + std::abs(g2 - q2),
                                   std::abs(1.0 + a * q1 * g1) + std::abs(1.0 + a * q2 * g2));
  return std::abs(det) / std::max(rowscale, 1e-300);
}

std::pair<double, double> displacement_110(const RayleighSolution& s, double kz,
                                           double kx, double t_phase) {
  if (kz < 0) throw std::invalid_argument("displacement_110: kz must be >= 0");
  const double chi = kx - t_phase;
  const cplx envelope = std::exp(-s.q * kz - cplx(0.0, s.phi));
  const double ux = 2.0 * envelope.real() * std::cos(chi);
  const double uz = 2.0 * (s.gamma * envelope).real() * std::sin(chi);
  return {ux, uz};
}

double PiezoFieldProfile::F(double kz) const {
  return 2.0 * std::abs(A1) * std::exp(-alpha * kz) * std::cos(beta * kz + phi + xi) +
         A3 * std::exp(-kz);
}

double PiezoFieldProfile::vacuum_side(double kz) const {
  return F(0.0) * std::exp(kz);
}

PiezoFieldProfile piezo_profile(const MaterialRecord& m, const RayleighSolution& s,
                                double k) {
  if (!m.e14 || !(*m.e14 > 0))
    throw std::invalid_argument("material '" + m.name + "' is not piezoelectric (e14 = 0)");
  if (!m.eps_rel)
    throw std::invalid_argument("material '" + m.name + "' has no permittivity");
  const double eps_r = 0.5 * (m.eps_rel->first + m.eps_rel->second);

  PiezoFieldProfile p;
  p.A1 = (s.gamma - 2.0 * s.q) / (s.q * s.q - 1.0);
  p.xi = -std::arg(p.A1);
  const cplx eiphi = std::exp(cplx(0.0, -s.phi));
  p.A3 = -2.0 / (eps_r + 1.0) *
         (eps_r * std::cos(s.phi) + eps_r * (p.A1 * s.q * eiphi).real() +
          (p.A1 * eiphi).real());
  p.alpha = s.q.real();
  p.beta = s.q.imag();
  p.phi = s.phi;
  p.k = k;
  p.phi0_scale = *m.e14 / (eps_r * constants::eps0);  // (e14/eps) * U at U = 1 m
  return p;
}

double vacuum_decay(double k, double d) {
  if (d < 0) throw std::invalid_argument("vacuum_decay: d must be >= 0");
  return std::exp(-k * d);
}

std::pair<double, double> default_c_window(const MaterialRecord& m) {
  require_elastic(m);
  const double vt = std::sqrt(*m.c44 / m.density);
  return {0.5 * vt, 1.0 * vt};
}

namespace {

struct DirectionScan {
  double l, mdir;  // cos(theta), sin(theta)
  double c11, c12, c44, rho;

  // kept roots and amplitude vectors at phase velocity c
  void roots_at(double c, std::vector<cplx>& qs,
                std::vector<std::array<cplx, 3>>& amps) const {
    const double rc2 = rho * c * c;
    const double cc = c12 + c44;
    // det M is cubic in s = q^2; assemble coefficients numerically by
    // evaluating at four points and solving the Vandermonde system.
    auto detM_of_s = [&](cplx s) {
      const cplx q2 = s;
      Eigen::Matrix3cd M;
      // q enters the determinant only through q^2 for the diagonal and
      // paired off-diagonal products; build with q = sqrt(s)
      const cplx q = std::sqrt(q2);
      M(0, 0) = c11 * l * l + c44 * (mdir * mdir - q2) - rc2;
      M(0, 1) = l * mdir * cc;
      M(0, 2) = l * q * cc;
      M(1, 0) = M(0, 1);
      M(1, 1) = c11 * mdir * mdir + c44 * (l * l - q2) - rc2;
      M(1, 2) = mdir * q * cc;
      M(2, 0) = M(0, 2);
      M(2, 1) = M(1, 2);
      M(2, 2) = c11 * q2 - c44 + rc2;
      return M.determinant();
    };
    // sample at 4 distinct s values; determinant is cubic in s
    const double scale = c44;
    std::array<cplx, 4> ss = {cplx(0.7, 0), cplx(-0.9, 0), cplx(1.9, 0), cplx(-2.3, 0)};
    Eigen::Matrix4cd V;
    Eigen::Vector4cd y;
    for (int i = 0; i < 4; ++i) {
      cplx s = ss[i];
      V(i, 0) = 1.0;
      V(i, 1) = s;
      V(i, 2) = s * s;
      V(i, 3) = s * s * s;
      y(i) = detM_of_s(s) / (scale * scale * scale);
    }
    Eigen::Vector4cd coef = V.fullPivLu().solve(y);
    double rc[4] = {coef(0).real(), coef(1).real(), coef(2).real(), coef(3).real()};
    auto sroots = poly_roots(rc);

    std::vector<cplx> kept;
    for (const cplx& s : sroots) {
      cplx q = std::sqrt(s);
      if (q.real() < 0.0) q = -q;
      if (q.real() > 1e-9) kept.push_back(q);  // strictly decaying roots only
    }
    // cluster coincident roots (isotropic parameters make the shear and
    // transverse-sagittal branches degenerate); a root of multiplicity m
    // contributes m independent polarization vectors from the null space.
    // The tolerance absorbs the numerical splitting of double roots.
    std::vector<std::pair<cplx, int>> clusters;
    for (const cplx& q : kept) {
      bool merged = false;
      for (auto& [qc, mult] : clusters) {
        if (std::abs(q - qc) < 3e-4 * (1.0 + std::abs(qc))) {
          qc = (qc * double(mult) + q) / double(mult + 1);
          ++mult;
          merged = true;
          break;
        }
      }
      if (!merged) clusters.emplace_back(q, 1);
    }

    qs.clear();
    amps.clear();
    for (const auto& [q, mult] : clusters) {
      const cplx m11 = c11 * l * l + c44 * (mdir * mdir - q * q) - rc2;
      const cplx m22 = c11 * mdir * mdir + c44 * (l * l - q * q) - rc2;
      const cplx m33 = c11 * q * q - c44 + rc2;
      const cplx m12 = l * mdir * cc;
      const cplx m13 = l * q * cc;
      const cplx m23 = mdir * q * cc;
      const double mscale = std::abs(m11) + std::abs(m22) + std::abs(m33) +
                            std::abs(m12) + std::abs(m13) + std::abs(m23);
      if (mult == 1) {
        // amplitude vector from the 2x2 cofactors (rows of adj M)
        std::array<cplx, 3> v = {m22 * m33 - m23 * m23, m23 * m13 - m12 * m33,
                                 m12 * m23 - m22 * m13};
        double nv = std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]);
        if (nv < 1e-10 * mscale * mscale) {
          v = {m12 * m23 - m13 * m22, m13 * m12 - m11 * m23, m11 * m22 - m12 * m12};
          nv = std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]);
        }
        if (nv >= 1e-10 * mscale * mscale) {
          for (auto& x : v) x /= nv;
          qs.push_back(q);
          amps.push_back(v);
          continue;
        }
      }
      // degenerate or cofactor-deficient: null space via SVD
      Eigen::Matrix3cd M;
      M << m11, m12, m13, m12, m22, m23, m13, m23, m33;
      Eigen::JacobiSVD<Eigen::Matrix3cd> svd(M, Eigen::ComputeFullV);
      for (int j = 0; j < mult && j < 3; ++j) {
        const auto col = svd.matrixV().col(2 - j);
        std::array<cplx, 3> v = {col(0), col(1), col(2)};
        const double nv = std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]);
        for (auto& x : v) x /= nv;
        qs.push_back(q);
        amps.push_back(v);
      }
    }
  }

  Eigen::MatrixXcd boundary_matrix(const std::vector<cplx>& qs,
                                   const std::vector<std::array<cplx, 3>>& amps) const {
    Eigen::MatrixXcd B(3, qs.size());
    const double a = c11 / c12;
    for (size_t r = 0; r < qs.size(); ++r) {
      const cplx xi = amps[r][0], eta = amps[r][1], zeta = amps[r][2];
      const cplx q = qs[r];
      B(0, r) = l * zeta - q * xi;
      B(1, r) = mdir * zeta - q * eta;
      B(2, r) = l * xi + mdir * eta + a * q * zeta;
    }
    for (Eigen::Index cix = 0; cix < B.cols(); ++cix) {
      const double n = B.col(cix).norm();
      if (n > 1e-14) B.col(cix) /= n;
    }
    return B;
  }

  // smallest singular value of the column-normalized boundary matrix; a
  // surface mode exists where it vanishes. High-symmetry directions keep
  // only two decaying partial waves (the shear branch turns propagating),
  // which leaves a 3x2 system: the rank-deficiency criterion covers both.
  double detB(double c) const {
    std::vector<cplx> qs;
    std::vector<std::array<cplx, 3>> amps;
    roots_at(c, qs, amps);
    if (qs.size() < 2) return 1.0;  // no surface superposition here
    const Eigen::MatrixXcd B = boundary_matrix(qs, amps);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
    return svd.singularValues().tail(1)(0);
  }
};

}  // namespace

GeneralModeSolution solve_general(const MaterialRecord& m, double theta,
                                  std::pair<double, double> c_window) {
  require_elastic(m);
  if (theta < 0.0 || theta > M_PI / 2.0 + 1e-12)
    throw std::invalid_argument("solve_general: theta must lie in [0, pi/2]");
  DirectionScan scan{std::cos(theta), std::sin(theta), *m.c11, *m.c12, *m.c44, m.density};

  const int kGrid = 2000;
  const double lo = c_window.first, hi = c_window.second;
  double best_c = lo, best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double c = lo + (hi - lo) * i / kGrid;
    const double v = scan.detB(c);
    if (v < best_v) {
      best_v = v;
      best_c = c;
    }
  }
  // golden-section refinement around the grid minimum
  const double step = (hi - lo) / kGrid;
  double a = std::max(lo, best_c - step), b = std::min(hi, best_c + step);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = scan.detB(x1), f2 = scan.detB(x2);
  for (int it = 0; it < 120 && (b - a) > 1e-12 * b; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = scan.detB(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = scan.detB(x2);
    }
  }
  const double c_star = 0.5 * (a + b);
  const double det_star = scan.detB(c_star);
  constexpr double kTol = 1e-6;  // relative, on the column-normalized det
  if (!(det_star < kTol))
    throw std::runtime_error("no surface mode in the scan window for '" + m.name +
                             "' (min |det B| = " + std::to_string(det_star) + ")");

  GeneralModeSolution out;
  out.theta = theta;
  out.c = c_star;
  out.detB_min = det_star;
  scan.roots_at(c_star, out.roots, out.amplitude_vectors);
  const Eigen::MatrixXcd B = scan.boundary_matrix(out.roots, out.amplitude_vectors);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B, Eigen::ComputeFullV);
  const auto kvec = svd.matrixV().col(svd.matrixV().cols() - 1);
  for (Eigen::Index i = 0; i < kvec.size() && i < 3; ++i) out.K[i] = kvec(i);
  return out;
}

}  // namespace sawqed
