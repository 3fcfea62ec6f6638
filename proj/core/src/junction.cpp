#include "ductmodes/junction.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "ductmodes/nonortho.hpp"
#include "ductmodes/special_fn.hpp"

namespace ductmodes {

namespace {

using EMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using EVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

// psi_n(r) = rigid_factor * J_m(alpha_n r).
double rigid_factor(int m, double alpha) {
  const double j = bessel_j(m, alpha).real();
  const double self = lommel_self(m, alpha).real();
  return (j < 0.0 ? -1.0 : 1.0) / std::sqrt(self);
}

cplx lined_factor(const Mode& mode) { return mode.scale / std::sqrt(normalization(mode)); }

EMatrix to_eigen(const CMatrix& m) {
  EMatrix e(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
  }
  return e;
}

CMatrix from_eigen(const EMatrix& e) {
  CMatrix m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) m(i, j) = e(i, j);
  }
  return m;
}

void check_truncation(int N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "truncation N must be >= 1");
}

}  // namespace

cplx rigid_eigenfunction(int m, double alpha, double r) {
  return rigid_factor(m, alpha) * bessel_j(m, alpha * r).real();
}

CMatrix coupling_matrix(const ModeSet& lined, const std::vector<double>& alpha) {
  const int ni = lined.truncation();
  const int nj = static_cast<int>(alpha.size());
  CMatrix F(ni, nj);
  std::vector<double> cr(nj);
  for (int j = 0; j < nj; ++j) cr[j] = rigid_factor(lined.spec.m, alpha[j]);
  for (int i = 0; i < ni; ++i) {
    const Mode& md = lined.modes[i];
    const cplx cl = lined_factor(md);
    for (int j = 0; j < nj; ++j) {
      F(i, j) = cl * cr[j] * lommel_overlap(md.m, md.gamma, alpha[j]);
    }
  }
  return F;
}

CMatrix coupling_matrix(const BoundarySpec& spec, int N) {
  check_truncation(N);
  return coupling_matrix(find_modes(spec, N), rigid_modes(spec.m, N));
}

std::vector<cplx> incident_amplitudes(const ModeSet& lined, const std::vector<double>& alpha) {
  const Mode& md = lined.modes.at(0);
  const cplx cl = lined_factor(md);
  std::vector<cplx> a(alpha.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    a[j] = std::conj(cl * rigid_factor(md.m, alpha[j]) * lommel_overlap(md.m, md.gamma, alpha[j]));
  }
  return a;
}

std::vector<cplx> incident_amplitudes(const BoundarySpec& spec, int N) {
  check_truncation(N);
  return incident_amplitudes(find_modes(spec, N), rigid_modes(spec.m, N));
}

JunctionSolution solve_junction(const BoundarySpec& spec, const std::vector<cplx>& A, int N) {
  check_truncation(N);
  if (static_cast<int>(A.size()) != N) {
    std::ostringstream os;
    os << "incident amplitude vector has length " << A.size() << ", expected " << N;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  JunctionSolution sol;
  sol.spec = spec;
  sol.N = N;
  sol.lined = find_modes(spec, N);
  sol.alpha = rigid_modes(spec.m, N);
  sol.F = coupling_matrix(sol.lined, sol.alpha);
  sol.A = A;
  sol.Kr.resize(N);
  sol.Kl.resize(N);
  sol.kp_prime_diag.resize(N);
  for (int i = 0; i < N; ++i) {
    sol.Kr[i] = axial_wavenumber(spec.K, sol.alpha[i]);
    sol.Kl[i] = sol.lined.modes[i].k_axial;
    const cplx so = self_overlap(sol.lined.modes[i]);
    if (std::abs(so) < 1.0 / std::sqrt(kKpCap)) {
      throw Error(ErrorCode::IllConditioned, "K'_p diverges: admittance is at an exceptional point");
    }
    sol.kp_prime_diag[i] = 1.0 / so;
  }

  const EMatrix F = to_eigen(sol.F);
  EVector kl_kp(N);
  for (int i = 0; i < N; ++i) kl_kp(i) = sol.Kl[i] * sol.kp_prime_diag[i];
  const EMatrix M = F.transpose() * kl_kp.asDiagonal() * F;
  EMatrix kr = EMatrix::Zero(N, N);
  for (int i = 0; i < N; ++i) kr(i, i) = sol.Kr[i];
  const Eigen::PartialPivLU<EMatrix> lu(kr + M);
  sol.rcond = lu.rcond();
  if (!(sol.rcond > 0.0) || 1.0 / sol.rcond > kMaxConditionNumber) {
    std::ostringstream os;
    os << "junction system condition estimate " << (sol.rcond > 0.0 ? 1.0 / sol.rcond : INFINITY)
       << " exceeds " << kMaxConditionNumber;
    throw Error(ErrorCode::IllConditioned, os.str());
  }
  const EMatrix G = lu.solve(kr - M);
  EVector a(N);
  for (int i = 0; i < N; ++i) a(i) = A[i];
  const EVector b = G * a;
  EVector kp(N);
  for (int i = 0; i < N; ++i) kp(i) = sol.kp_prime_diag[i];
  const EVector c = kp.asDiagonal() * (F * (a + b));
  sol.G = from_eigen(G);
  sol.B.assign(b.data(), b.data() + N);
  sol.C.assign(c.data(), c.data() + N);
  return sol;
}

JunctionSolution solve_junction(const BoundarySpec& spec, int N) {
  return solve_junction(spec, incident_amplitudes(spec, N), N);
}

cplx pressure_field(const JunctionSolution& sol, double r, double z) {
  cplx p = 0.0;
  for (int i = 0; i < sol.N; ++i) {
    const Mode& md = sol.lined.modes[i];
    p += sol.C[i] * lined_factor(md) * bessel_j(md.m, md.gamma * r) * std::exp(-kJ * sol.Kl[i] * z);
  }
  return p;
}

cplx rigid_pressure(const JunctionSolution& sol, double r) {
  cplx p = 0.0;
  for (int n = 0; n < sol.N; ++n) {
    p += (sol.A[n] + sol.B[n]) * rigid_eigenfunction(sol.spec.m, sol.alpha[n], r);
  }
  return p;
}

ContinuityResiduals continuity_residuals(const JunctionSolution& sol, int points) {
  const QuadratureRule rule = gauss_legendre(points);
  std::vector<double> cr(sol.N);
  std::vector<cplx> cl(sol.N);
  for (int n = 0; n < sol.N; ++n) {
    cr[n] = rigid_factor(sol.spec.m, sol.alpha[n]);
    cl[n] = lined_factor(sol.lined.modes[n]);
  }
  double pres = 0.0, vel = 0.0, norm_a = 0.0;
  for (cplx a : sol.A) norm_a += std::norm(a);
  norm_a = std::sqrt(norm_a);
  for (int k = 0; k < points; ++k) {
    const double r = rule.nodes[k];
    cplx pr = 0.0, pl = 0.0, vr = 0.0, vl = 0.0;
    for (int n = 0; n < sol.N; ++n) {
      const double psi = cr[n] * bessel_j(sol.spec.m, sol.alpha[n] * r).real();
      pr += (sol.A[n] + sol.B[n]) * psi;
      vr += sol.Kr[n] * (sol.A[n] - sol.B[n]) * psi;
      const Mode& md = sol.lined.modes[n];
      const cplx phi = cl[n] * bessel_j(md.m, md.gamma * r);
      pl += sol.C[n] * phi;
      vl += sol.Kl[n] * sol.C[n] * phi;
    }
    pres += rule.weights[k] * r * std::norm(pr - pl);
    vel += rule.weights[k] * r * std::norm((vr - vl) / sol.spec.K);
  }
  ContinuityResiduals res;
  res.pressure = std::sqrt(pres) / norm_a;
  res.velocity = std::sqrt(vel) / norm_a;
  return res;
}

}  // namespace ductmodes
