#pragma once

// Reference implementations used only by the tests. None of them call into
// the library, so agreement with it is an independent check.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

// J_m(z) = (1/pi) int_0^pi cos(m t - z sin t) dt by the trapezoid rule. The
// integrand is smooth and periodic, so the rule converges geometrically.
inline cplx bessel_j(int m, cplx z, int points = 0) {
  if (points == 0) points = 64 + 4 * static_cast<int>(std::abs(z) + m);
  const double h = M_PI / points;
  cplx sum = 0.5 * (std::cos(cplx(0.0)) + std::cos(cplx(m * M_PI) - z * std::sin(M_PI)));
  for (int k = 1; k < points; ++k) {
    const double t = k * h;
    sum += std::cos(static_cast<double>(m) * t - z * std::sin(t));
  }
  return sum * h / M_PI;
}

inline cplx bessel_j_prime(int m, cplx z) {
  if (m == 0) return -bessel_j(1, z);
  return 0.5 * (bessel_j(m - 1, z) - bessel_j(m + 1, z));
}

// Alternating power series in long double, for real arguments.
inline long double series_j(int m, long double x) {
  long double term = 1.0L;
  for (int k = 1; k <= m; ++k) term *= x / (2.0L * k);
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(x * x) / (4.0L * k * (m + k));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && k > x) break;
  }
  return sum;
}

inline long double series_j_prime(int m, long double x) {
  if (m == 0) return -series_j(1, x);
  return 0.5L * (series_j(m - 1, x) - series_j(m + 1, x));
}

inline double bisect(const std::function<long double(long double)>& f, long double a, long double b) {
  long double fa = f(a);
  for (int it = 0; it < 200 && b - a > 1e-16L * b; ++it) {
    const long double c = 0.5L * (a + b);
    const long double fc = f(c);
    if ((fc < 0) == (fa < 0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  return static_cast<double>(0.5L * (a + b));
}

// Roots of f on (0, xmax] found by sign changes on a fine grid.
inline std::vector<double> real_roots(const std::function<long double(long double)>& f, int count,
                                      double step = 0.01) {
  std::vector<double> out;
  long double x0 = step;
  long double f0 = f(x0);
  while (static_cast<int>(out.size()) < count && x0 < 60.0L) {
    const long double x1 = x0 + step;
    const long double f1 = f(x1);
    if ((f0 < 0) != (f1 < 0)) out.push_back(bisect(f, x0, x1));
    x0 = x1;
    f0 = f1;
  }
  return out;
}

// The long double series loses digits past x ~ 10; the trapezoid form takes over there.
inline long double real_j(int m, long double x) {
  if (x < 10.0L) return series_j(m, x);
  return bessel_j(m, static_cast<double>(x), 400).real();
}

inline long double real_j_prime(int m, long double x) {
  if (m == 0) return -real_j(1, x);
  return 0.5L * (real_j(m - 1, x) - real_j(m + 1, x));
}

// First `count` roots of J'_m (with 0 first for m = 0).
inline std::vector<double> rigid_roots(int m, int count) {
  std::vector<double> out;
  if (m == 0) out.push_back(0.0);
  const auto rest = real_roots([m](long double x) { return real_j_prime(m, x); },
                               count - static_cast<int>(out.size()));
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

inline std::vector<double> bessel_zeros(int m, int count) {
  return real_roots([m](long double x) { return real_j(m, x); }, count);
}

// Gauss-Legendre nodes and weights on [0, 1] by the Golub-Welsch eigenproblem.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    const double v = es.eigenvectors()(0, i);
    x[i] = 0.5 * (1.0 + es.eigenvalues()(i));
    w[i] = v * v;
  }
  return cache[n] = {x, w};
}

// int_0^1 f(r) g(r) r dr with 64 Gauss-Legendre points.
inline cplx quad(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g, int n = 64) {
  const auto [x, w] = gauss_legendre(n);
  cplx s = 0.0;
  for (int i = 0; i < n; ++i) s += w[i] * f(x[i]) * g(x[i]) * x[i];
  return s;
}

inline cplx lommel(int m, cplx a, cplx b, int n = 64) {
  return quad([&](double r) { return bessel_j(m, a * r); }, [&](double r) { return bessel_j(m, b * r); }, n);
}

// Eigenvalues of a dense 2x2 complex matrix, sorted by real part then imaginary part.
inline std::pair<cplx, cplx> eig2(cplx a, cplx b, cplx c, cplx d) {
  Eigen::Matrix2cd m;
  m << a, b, c, d;
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m, false);
  cplx e0 = es.eigenvalues()(0), e1 = es.eigenvalues()(1);
  auto less = [](cplx p, cplx q) { return p.real() < q.real() || (p.real() == q.real() && p.imag() < q.imag()); };
  if (less(e1, e0)) std::swap(e0, e1);
  return {e0, e1};
}

// gamma J_m'(gamma) / J_m(gamma) from oracle Bessel values.
inline cplx dispersion_lhs(int m, cplx g) { return g * bessel_j_prime(m, g) / bessel_j(m, g); }

}  // namespace oracle
