#include "ductmodes/special_fn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace ductmodes {

namespace {

void check_argument(int m, cplx z) {
  if (m < 0 || m > kMaxBesselOrder) {
    std::ostringstream os;
    os << "Bessel order " << m << " outside [0, " << kMaxBesselOrder << "]";
    throw Error(ErrorCode::RangeExceeded, os.str());
  }
  if (!is_finite(z) || std::abs(z) >= kMaxBesselArgument ||
      std::abs(z.imag()) > kMaxBesselImag) {
    std::ostringstream os;
    os << "Bessel argument " << z << " outside the supported range";
    throw Error(ErrorCode::RangeExceeded, os.str());
  }
}

// Ascending series  J_m(z) = (z/2)^m sum_k (-z^2/4)^k / (k! (m+k)!).
cplx series_j(int m, cplx z) {
  const cplx half = 0.5 * z;
  cplx term = 1.0;
  for (int k = 1; k <= m; ++k) term *= half / static_cast<double>(k);
  if (term == cplx{}) return {};
  const cplx q = -half * half;
  const double kmin = 0.5 * std::abs(z);
  cplx sum = term;
  for (int k = 0; k < 400; ++k) {
    term *= q / (static_cast<double>(k + 1) * static_cast<double>(m + k + 1));
    sum += term;
    if (k > kmin && std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller backward recurrence normalised with the generating function
//   exp(-i z) = J_0 + 2 sum_n (-i)^n J_n   (Im z >= 0),
//   exp( i z) = J_0 + 2 sum_n ( i)^n J_n   (Im z <  0),
// which keeps the normalising sum free of cancellation when |Im z| is large.
std::vector<cplx> miller_sequence(int max_order, cplx z) {
  const double az = std::abs(z);
  const int start = std::max(max_order, static_cast<int>(std::ceil(az))) +
                    static_cast<int>(std::ceil(10.0 * std::cbrt(az))) + 20;
  std::vector<cplx> j(static_cast<std::size_t>(start) + 2);
  j[start + 1] = 0.0;
  j[start] = 1e-30;
  const cplx two_over_z = 2.0 / z;
  for (int n = start; n >= 1; --n) {
    j[n - 1] = static_cast<double>(n) * two_over_z * j[n] - j[n + 1];
    if (std::abs(j[n - 1]) > 1e250) {
      for (int k = n - 1; k <= start; ++k) j[k] *= 1e-250;
    }
  }
  const bool upper = z.imag() >= 0.0;
  const cplx w = upper ? -kJ : kJ;
  cplx phase = 1.0;
  cplx sum = j[0];
  for (int n = 1; n <= start; ++n) {
    phase *= w;
    sum += 2.0 * phase * j[n];
  }
  const cplx scale = (upper ? std::exp(-kJ * z) : std::exp(kJ * z)) / sum;
  std::vector<cplx> out(static_cast<std::size_t>(max_order) + 1);
  for (int n = 0; n <= max_order; ++n) out[n] = j[n] * scale;
  return out;
}

bool use_series(cplx z) { return std::abs(z) <= kSeriesRadius; }

// Coefficients of the power series of J_m(a r) for use in product series:
// entry k is (-1)^k (a/2)^(m+2k) / (k! (m+k)!).
std::array<cplx, 28> small_series_coefficients(int m, cplx a) {
  std::array<cplx, 28> c{};
  cplx t = 1.0;
  const cplx half = 0.5 * a;
  for (int k = 1; k <= m; ++k) t *= half / static_cast<double>(k);
  c[0] = t;
  const cplx q = -half * half;
  for (std::size_t k = 1; k < c.size(); ++k) {
    c[k] = c[k - 1] * q /
           (static_cast<double>(k) * static_cast<double>(m + static_cast<int>(k)));
  }
  return c;
}

// Double power series of the overlap integral, used when both arguments are
// small enough that the terms decay from the start.
cplx small_argument_overlap(int m, cplx a, cplx b) {
  const auto ca = small_series_coefficients(m, a);
  const auto cb = small_series_coefficients(m, b);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < ca.size(); ++k) {
    for (std::size_t l = 0; l + k < ca.size(); ++l) {
      sum += ca[k] * cb[l] /
             (2.0 * static_cast<double>(m + static_cast<int>(k + l) + 1));
    }
  }
  return sum;
}

bool small_enough_for_series(int m, cplx a, cplx b) {
  const double r2 = std::max(std::norm(a), std::norm(b));
  return r2 <= std::max(1.0, 2.0 * (m + 1));
}

cplx closed_form_overlap(int m, cplx a, cplx b) {
  const BesselTriple ta = bessel_j_triple(m, a);
  const BesselTriple tb = bessel_j_triple(m, b);
  const cplx dja = m == 0 ? -ta.next : 0.5 * (ta.prev - ta.next);
  const cplx djb = m == 0 ? -tb.next : 0.5 * (tb.prev - tb.next);
  return (b * ta.value * djb - a * dja * tb.value) / (a * a - b * b);
}

// Lommel integral for b = a - 2h written as an even series in h around the
// midpoint c, using Taylor coefficients of J_m about c generated from Bessel's
// equation. Returns false when the series does not settle.
bool midpoint_overlap(int m, cplx a, cplx b, cplx& out) {
  const cplx c = 0.5 * (a + b);
  const cplx h = 0.5 * (a - b);
  if (std::abs(c) < 0.25) return false;
  constexpr int kDegree = 64;
  std::array<cplx, kDegree + 3> t{};
  const BesselTriple tc = bessel_j_triple(m, c);
  t[0] = tc.value;
  t[1] = m == 0 ? -tc.next : 0.5 * (tc.prev - tc.next);
  const cplx c2 = c * c;
  const double mm = static_cast<double>(m) * m;
  for (int k = 0; k + 2 < static_cast<int>(t.size()); ++k) {
    const double kd = k;
    cplx acc = c * (kd + 1.0) * (2.0 * kd + 1.0) * t[k + 1] + (kd * kd + c2 - mm) * t[k];
    if (k >= 1) acc += 2.0 * c * t[k - 1];
    if (k >= 2) acc += t[k - 2];
    t[k + 2] = -acc / (c2 * (kd + 2.0) * (kd + 1.0));
  }
  // P(h) = u(c+h) u'(c-h); p_k = sum_{i+j=k} t_i (j+1) t_{j+1} (-1)^j.
  std::array<cplx, kDegree + 2> p{};
  for (int k = 0; k <= kDegree + 1; ++k) {
    cplx s = 0.0;
    for (int j = 0; j <= k; ++j) {
      const cplx dj = static_cast<double>(j + 1) * t[j + 1];
      s += (j % 2 == 0 ? 1.0 : -1.0) * t[k - j] * dj;
    }
    p[k] = s;
  }
  const cplx h2 = h * h;
  cplx hp = 1.0;
  cplx sum = 0.0;
  int quiet = 0;
  for (int j = 0; j + 1 <= kDegree + 1; j += 2) {
    const cplx term = hp * (c * p[j + 1] - p[j]);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      if (++quiet == 2) {
        out = sum / (2.0 * c);
        return is_finite(out);
      }
    } else {
      quiet = 0;
    }
    hp *= h2;
  }
  return false;
}

// J_{m+1}(z) / J_m(z) from the backward ratio recurrence; used where the
// values themselves underflow (large order, small argument).
cplx bessel_ratio(int m, cplx z) {
  const double az = std::abs(z);
  const int start = std::max(m, static_cast<int>(std::ceil(az))) +
                    static_cast<int>(std::ceil(10.0 * std::cbrt(az))) + 20;
  cplx r = 0.0;
  for (int n = start; n >= m; --n) r = 1.0 / (2.0 * static_cast<double>(n + 1) / z - r);
  return r;
}

constexpr double kTiny = 1e-280;

}  // namespace

cplx bessel_j(int m, cplx z) {
  check_argument(m, z);
  if (z == cplx{}) return m == 0 ? 1.0 : 0.0;
  if (use_series(z)) return series_j(m, z);
  return miller_sequence(m, z)[m];
}

BesselTriple bessel_j_triple(int m, cplx z) {
  check_argument(m, z);
  if (z == cplx{}) {
    if (m == 0) return {0.0, 1.0, 0.0};
    return {m == 1 ? 1.0 : 0.0, 0.0, 0.0};
  }
  if (use_series(z)) {
    const cplx next = series_j(m + 1, z);
    const cplx prev = m == 0 ? -next : series_j(m - 1, z);
    return {prev, series_j(m, z), next};
  }
  const auto seq = miller_sequence(m + 1, z);
  const cplx prev = m == 0 ? -seq[1] : seq[m - 1];
  return {prev, seq[m], seq[m + 1]};
}

std::vector<cplx> bessel_j_sequence(int max_order, cplx z) {
  check_argument(max_order, z);
  if (z == cplx{} || use_series(z)) {
    std::vector<cplx> out(static_cast<std::size_t>(max_order) + 1);
    for (int n = 0; n <= max_order; ++n) out[n] = z == cplx{} ? (n == 0 ? 1.0 : 0.0) : series_j(n, z);
    return out;
  }
  return miller_sequence(max_order, z);
}

cplx bessel_j_prime(int m, cplx z) {
  const BesselTriple t = bessel_j_triple(m, z);
  if (m == 0) return -t.next;
  return 0.5 * (t.prev - t.next);
}

DispersionTerms dispersion_terms(int m, cplx gamma) {
  if (m < 0 || m > kMaxBesselOrder) {
    throw Error(ErrorCode::RangeExceeded, "dispersion order outside supported range");
  }
  const double md = m;
  if (std::abs(gamma) < 1e-3) {
    // g = m + a gamma^2 + b gamma^4 + O(gamma^6)
    const double a = -1.0 / (2.0 * (md + 1.0));
    const double b = -1.0 / (8.0 * (md + 1.0) * (md + 1.0) * (md + 2.0));
    const cplx g2 = gamma * gamma;
    return {md + a * g2 + b * g2 * g2, 2.0 * a * gamma + 4.0 * b * g2 * gamma,
            2.0 * a + 12.0 * b * g2};
  }
  const BesselTriple t = bessel_j_triple(m, gamma);
  const cplx jp = m == 0 ? -t.next : 0.5 * (t.prev - t.next);
  const bool tiny = std::abs(t.value) < kTiny;
  if (std::abs(gamma) >= 1.0 && !tiny && std::abs(t.value) < 1e-14 * std::abs(jp)) {
    std::ostringstream os;
    os << "dispersion ratio has a pole at gamma = " << gamma;
    throw Error(ErrorCode::Pole, os.str());
  }
  // z J'_m = m J_m - z J_{m+1}, so g = m - gamma rho with rho = J_{m+1}/J_m.
  const cplx rho = tiny ? bessel_ratio(m, gamma) : t.next / t.value;
  const cplx g = md - gamma * rho;
  const cplx dg = rho * (md + g) - gamma;
  const cplx d2g = -(2.0 * g * dg + rho * (md + g)) / gamma - 1.0;
  return {g, dg, d2g};
}

cplx dispersion_lhs(int m, cplx gamma) { return dispersion_terms(m, gamma).g; }

ReciprocalTerms reciprocal_dispersion_terms(int m, cplx gamma) {
  if (m < 0 || m > kMaxBesselOrder) {
    throw Error(ErrorCode::RangeExceeded, "dispersion order outside supported range");
  }
  if (m >= 1 && std::abs(gamma) < 1e-3) {
    const DispersionTerms d = dispersion_terms(m, gamma);
    return {1.0 / d.g, -d.dg / (d.g * d.g)};
  }
  const BesselTriple t = bessel_j_triple(m, gamma);
  cplx q;
  if (std::abs(t.value) < kTiny) {
    q = 1.0 / (static_cast<double>(m) - gamma * bessel_ratio(m, gamma));
  } else {
    const cplx denom = static_cast<double>(m) * t.value - gamma * t.next;  // gamma J'_m
    if (std::abs(denom) < 1e-14 * std::abs(t.value)) {
      std::ostringstream os;
      os << "reciprocal dispersion ratio has a pole at gamma = " << gamma;
      throw Error(ErrorCode::Pole, os.str());
    }
    q = t.value / denom;
  }
  const double mm = static_cast<double>(m) * m;
  return {q, (1.0 - mm * q * q) / gamma + gamma * q * q};
}

cplx lommel_cross(int m, cplx a, cplx b) {
  check_argument(m, a);
  check_argument(m, b);
  if (std::abs(a * a - b * b) < 1e-8) {
    std::ostringstream os;
    os << "lommel_cross arguments " << a << ", " << b
       << " are degenerate (|a^2-b^2| < 1e-8); use lommel_self";
    throw Error(ErrorCode::DegenerateArguments, os.str());
  }
  return lommel_overlap(m, a, b);
}

cplx lommel_self(int m, cplx a) {
  check_argument(m, a);
  if (small_enough_for_series(m, a, a)) return small_argument_overlap(m, a, a);
  const BesselTriple t = bessel_j_triple(m, a);
  const cplx jp = m == 0 ? -t.next : 0.5 * (t.prev - t.next);
  const double mm = static_cast<double>(m) * m;
  return 0.5 * (jp * jp + (1.0 - mm / (a * a)) * t.value * t.value);
}

cplx lommel_overlap(int m, cplx a, cplx b) {
  check_argument(m, a);
  check_argument(m, b);
  if (small_enough_for_series(m, a, b)) return small_argument_overlap(m, a, b);
  // J_m(-x) = (-1)^m J_m(x): fold b ≈ -a onto b ≈ a.
  double sign = 1.0;
  if (std::abs(a + b) < std::abs(a - b)) {
    b = -b;
    if (m % 2 == 1) sign = -1.0;
  }
  const double h = 0.5 * std::abs(a - b);
  const double c = 0.5 * std::abs(a + b);
  if (h == 0.0) return sign * lommel_self(m, a);
  if (h <= 0.1 && h * std::max(1.0, m / c) <= 0.5) {
    cplx out;
    if (midpoint_overlap(m, a, b, out)) return sign * out;
  }
  return sign * closed_form_overlap(m, a, b);
}

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "quadrature order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[order - 1 - i] = 0.5 * w;
  }
  return rule;
}

cplx quad_overlap(const RadialFunction& f, const RadialFunction& g, int order) {
  if (order < 8 || order > 512) {
    throw Error(ErrorCode::RangeExceeded, "quadrature order must lie in [8, 512]");
  }
  const QuadratureRule rule = gauss_legendre(order);
  cplx sum = 0.0;
  for (int i = 0; i < order; ++i) {
    const double r = rule.nodes[i];
    sum += rule.weights[i] * f(r) * g(r) * r;
  }
  return sum;
}

}  // namespace ductmodes
