#include "ductmodes/nonortho.hpp"

#include <cmath>

namespace ductmodes {

double normalization(const Mode& mode) {
  const double lam = std::norm(mode.scale) *
                     lommel_overlap(mode.m, mode.gamma, std::conj(mode.gamma)).real();
  if (!(lam > 0.0) || !std::isfinite(lam)) {
    throw Error(ErrorCode::DegenerateArguments, "eigenfunction normalisation is not positive");
  }
  return lam;
}

RadialFunction right_eigenfunction(const Mode& mode) {
  const cplx c = mode.scale / std::sqrt(normalization(mode));
  const int m = mode.m;
  const cplx g = mode.gamma;
  return [c, m, g](double r) { return c * bessel_j(m, g * r); };
}

RadialFunction left_eigenfunction(const Mode& mode) {
  RadialFunction right = right_eigenfunction(mode);
  return [right](double r) { return std::conj(right(r)); };
}

cplx mutual_overlap(const Mode& a, const Mode& b) {
  if (a.m != b.m) throw Error(ErrorCode::InvalidArgument, "overlaps need modes of the same order m");
  const cplx raw = a.scale * std::conj(b.scale) * lommel_overlap(a.m, a.gamma, std::conj(b.gamma));
  return raw / std::sqrt(normalization(a) * normalization(b));
}

cplx self_overlap(const Mode& mode) {
  return mode.scale * mode.scale * lommel_self(mode.m, mode.gamma) / normalization(mode);
}

NonorthReport kp(const Mode& mode) {
  NonorthReport rep;
  rep.mode_index = mode.n;
  rep.self_overlap = self_overlap(mode);
  const double mag = std::abs(rep.self_overlap);
  const double floor = 1.0 / std::sqrt(kKpCap);
  if (mag <= floor) {
    rep.capped = true;
    rep.kp = kKpCap;
    rep.kp_prime = mag == 0.0 ? cplx{std::sqrt(kKpCap)} : std::polar(std::sqrt(kKpCap), -std::arg(rep.self_overlap));
    return rep;
  }
  rep.kp_prime = 1.0 / rep.self_overlap;
  rep.kp = std::norm(rep.kp_prime);
  return rep;
}

cplx biorthogonal_overlap(const Mode& a, const Mode& b) {
  if (a.m != b.m) throw Error(ErrorCode::InvalidArgument, "overlaps need modes of the same order m");
  return a.scale * b.scale * lommel_overlap(a.m, a.gamma, b.gamma);
}

CMatrix sij_matrix(const ModeSet& set) {
  const int n = set.truncation();
  CMatrix s(n, n);
  std::vector<double> lam(n);
  for (int i = 0; i < n; ++i) lam[i] = normalization(set.modes[i]);
  for (int i = 0; i < n; ++i) {
    s(i, i) = 1.0;
    const Mode& a = set.modes[i];
    for (int j = i + 1; j < n; ++j) {
      const Mode& b = set.modes[j];
      if (a.m != b.m) throw Error(ErrorCode::InvalidArgument, "overlaps need modes of the same order m");
      const cplx v = a.scale * std::conj(b.scale) * lommel_overlap(a.m, a.gamma, std::conj(b.gamma)) /
                     std::sqrt(lam[i] * lam[j]);
      s(i, j) = v;
      s(j, i) = std::conj(v);
    }
  }
  return s;
}

}  // namespace ductmodes
