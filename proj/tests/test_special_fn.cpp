#include <doctest.h>

#include <algorithm>
#include <random>

#include "ductmodes/special_fn.hpp"
#include "support/oracles.hpp"

using namespace ductmodes;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST_CASE("bessel_j trivial values") {
  CHECK(bessel_j(0, 0.0) == cplx(1.0));
  CHECK(bessel_j(1, 0.0) == cplx(0.0));
  const double j01 = oracle::bessel_zeros(0, 1)[0];
  CHECK(std::abs(j01 - 2.404826) < 1e-6);
  CHECK(std::abs(bessel_j(0, 2.404826)) < 1e-6);
  CHECK(std::abs(bessel_j(0, j01)) < 1e-15);
}

TEST_CASE("bessel_j_prime trivial values") {
  CHECK(std::abs(bessel_j_prime(0, 0.0)) == 0.0);
  CHECK(std::abs(bessel_j_prime(0, 3.831706)) < 1e-6);
  CHECK(std::abs(bessel_j_prime(1, 0.0) - 0.5) < 1e-15);
}

TEST_CASE("bessel_j agrees with the integral representation") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> rad(0.0, 40.0), arg(-M_PI, M_PI);
  std::uniform_int_distribution<int> ord(0, 30);
  for (int k = 0; k < 300; ++k) {
    const cplx z = std::polar(rad(rng), arg(rng) / 4.0);
    const int m = ord(rng);
    const cplx ref = oracle::bessel_j(m, z);
    // The trapezoid sum carries absolute error ~1e-16 e^{|Im z|}.
    const double tol = 1e-12 * std::abs(ref) + 1e-15 * std::exp(std::abs(z.imag()));
    CHECK(std::abs(bessel_j(m, z) - ref) <= tol);
  }
}

TEST_CASE("bessel_j agrees with long double series on the real axis, x < 12") {
  for (int m : {0, 1, 2, 5, 10, 20}) {
    for (double x = 0.05; x < 12.0; x += 0.23) {
      const double ref = static_cast<double>(oracle::series_j(m, x));
      if (std::abs(ref) < 1e-200) continue;
      CHECK(std::abs(bessel_j(m, x) - ref) <= 1e-12 * std::abs(ref) + 1e-16);
    }
  }
}

TEST_CASE("recurrence consistency on |z| <= 50") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> rad(0.1, 50.0), arg(-M_PI, M_PI);
  std::uniform_int_distribution<int> ord(1, 40);
  for (int k = 0; k < 500; ++k) {
    const double r = rad(rng);
    // Keep |Im z| moderate so J is representable without overflow in the check.
    const cplx z = std::polar(r, arg(rng));
    if (std::abs(z.imag()) > 600) continue;
    const int m = ord(rng);
    const auto t = bessel_j_triple(m, z);
    const cplx lhs = t.prev + t.next;
    const cplx rhs = 2.0 * m / z * t.value;
    const double scale = std::max({std::abs(t.prev), std::abs(t.next), std::abs(rhs)});
    CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
  }
}

TEST_CASE("bessel_j_sequence matches individual evaluations") {
  const cplx z(12.5, -3.0);
  const auto seq = bessel_j_sequence(25, z);
  for (int m = 0; m <= 25; ++m) CHECK(rel(seq[m], bessel_j(m, z)) < 1e-13);
}

TEST_CASE("range errors") {
  auto code_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of([] { bessel_j(201, 1.0); }) == ErrorCode::RangeExceeded);
  CHECK(code_of([] { bessel_j(-1, 1.0); }) == ErrorCode::RangeExceeded);
  CHECK(code_of([] { bessel_j(0, 1e4); }) == ErrorCode::RangeExceeded);
  CHECK(code_of([] { bessel_j(0, cplx(0.0, 800.0)); }) == ErrorCode::RangeExceeded);
  CHECK(code_of([] { bessel_j(0, cplx(NAN, 0.0)); }) == ErrorCode::RangeExceeded);
  CHECK_NOTHROW(bessel_j(200, 9999.0));
}

TEST_CASE("dispersion_lhs examples") {
  CHECK(std::abs(dispersion_lhs(0, 1e-6)) < 1e-11);
  CHECK(std::abs(dispersion_lhs(0, 1e-6) + 0.5e-12) < 1e-20);
  CHECK(std::abs(dispersion_lhs(0, 3.831706)) < 1e-5);
  const cplx g(2.0, 1.0);
  CHECK(rel(dispersion_lhs(0, g), oracle::dispersion_lhs(0, g)) < 1e-12);
  for (int m : {1, 3, 7}) {
    const cplx z(5.3, -0.7);
    CHECK(rel(dispersion_lhs(m, z), oracle::dispersion_lhs(m, z)) < 1e-11);
  }
}

TEST_CASE("dispersion_lhs pole at a zero of J_m") {
  const double j01 = oracle::bessel_zeros(0, 1)[0];
  CHECK_THROWS_AS(dispersion_lhs(0, j01), Error);
  try {
    dispersion_lhs(0, j01);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Pole);
  }
}

TEST_CASE("dispersion_lhs at large order and small argument") {
  // J_m is tiny here but the ratio is regular: g -> m - gamma^2/(2(m+1)).
  for (int m : {14, 30, 200}) {
    const cplx g(-0.5, -1.0);
    const cplx approx = static_cast<double>(m) - g * g / (2.0 * (m + 1));
    CHECK(std::abs(dispersion_lhs(m, g) - approx) < 1e-3);
  }
}

TEST_CASE("dispersion derivatives match finite differences") {
  for (cplx g : {cplx(2.0, 1.0), cplx(7.3, 0.4), cplx(1e-4, 2e-4), cplx(15.0, 6.0)}) {
    for (int m : {0, 2}) {
      const auto t = dispersion_terms(m, g);
      const double h = 1e-6 * std::max(1.0, std::abs(g));
      const cplx d = (dispersion_lhs(m, g + h) - dispersion_lhs(m, g - h)) / (2.0 * h);
      const cplx d2 = (dispersion_terms(m, g + h).dg - dispersion_terms(m, g - h).dg) / (2.0 * h);
      CHECK(std::abs(t.dg - d) < 1e-6 * std::max(1.0, std::abs(d)));
      CHECK(std::abs(t.d2g - d2) < 1e-5 * std::max(1.0, std::abs(d2)));
    }
  }
}

TEST_CASE("reciprocal form is the reciprocal of the dispersion ratio") {
  for (cplx g : {cplx(2.0, 1.0), cplx(9.1, -0.3), cplx(0.5, 0.5)}) {
    const auto r = reciprocal_dispersion_terms(1, g);
    CHECK(rel(r.q, 1.0 / dispersion_lhs(1, g)) < 1e-12);
  }
  // Finite at a zero of J_m, where the direct form has its pole.
  const double j01 = oracle::bessel_zeros(0, 1)[0];
  CHECK(std::abs(reciprocal_dispersion_terms(0, j01).q) < 1e-14);
}

TEST_CASE("lommel_cross examples") {
  const auto roots = oracle::rigid_roots(0, 3);
  CHECK(std::abs(lommel_cross(0, roots[1], roots[2])) < 1e-14);
  CHECK(std::abs(lommel_cross(0, 1.0, 2.0) - oracle::lommel(0, 1.0, 2.0)) < 1e-10);
  const cplx a(1.0, 0.5), b(2.0, -0.3);
  CHECK(std::abs(lommel_cross(1, a, b) - oracle::lommel(1, a, b)) < 1e-10);
  CHECK_THROWS_AS(lommel_cross(0, 2.0, 2.0 + 1e-10), Error);
}

TEST_CASE("lommel_self examples") {
  CHECK(std::abs(lommel_self(0, 0.0) - 0.5) < 1e-15);
  const double a = oracle::rigid_roots(0, 2)[1];
  const cplx j0 = bessel_j(0, a);
  CHECK(std::abs(lommel_self(0, a) - 0.5 * j0 * j0) < 1e-12);
  CHECK(std::abs(lommel_self(0, a) - oracle::lommel(0, a, a)) < 1e-10);
  const cplx z(1.0, 1.0);
  CHECK(std::abs(lommel_self(2, z) - oracle::lommel(2, z, z)) < 1e-10);
}

TEST_CASE("Lommel forms agree with quadrature for random arguments") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> rad(0.0, 40.0), arg(-M_PI, M_PI);
  std::uniform_int_distribution<int> ord(0, 8);
  for (int k = 0; k < 60; ++k) {
    const cplx a = std::polar(rad(rng), arg(rng) / 8.0);
    const cplx b = std::polar(rad(rng), arg(rng) / 8.0);
    const int m = ord(rng);
    // 64-point quadrature resolves the integrand only while |Im| stays small.
    const double scale = std::exp(std::abs(a.imag()) + std::abs(b.imag()));
    const cplx ref = oracle::lommel(m, a, b, 128);
    CHECK(std::abs(lommel_overlap(m, a, b) - ref) <= 1e-10 * std::max(1.0, scale));
    CHECK(std::abs(lommel_self(m, a) - oracle::lommel(m, a, a, 128)) <=
          1e-10 * std::max(1.0, std::exp(2 * std::abs(a.imag()))));
  }
}

TEST_CASE("lommel symmetry and continuity across the degenerate switch") {
  for (cplx a : {cplx(3.0, 0.2), cplx(11.0, -1.0), cplx(0.7, 0.1)}) {
    for (int m : {0, 1, 4}) {
      const cplx b = a * 1.3 + cplx(0.1, 0.0);
      CHECK(std::abs(lommel_cross(m, a, b) - lommel_cross(m, b, a)) <= 1e-13 * std::abs(lommel_cross(m, a, b)));
      const cplx near = lommel_overlap(m, a, a + 1e-5);
      CHECK(std::abs(near - lommel_self(m, a)) <= 1e-6 * std::max(1.0, std::abs(lommel_self(m, a))));
    }
  }
}

TEST_CASE("quad_overlap examples") {
  CHECK(std::abs(quad_overlap([](double) { return cplx(1.0); }, [](double) { return cplx(1.0); }, 16) - 0.5) <
        1e-15);
  CHECK(std::abs(quad_overlap([](double r) { return cplx(r); }, [](double r) { return cplx(r); }, 16) - 0.25) <
        1e-15);
  const double a = 2.404826;
  auto f = [a](double r) { return bessel_j(0, a * r); };
  CHECK(std::abs(quad_overlap(f, f, 64) - lommel_self(0, a)) < 1e-12);
  CHECK_THROWS_AS(quad_overlap(f, f, 4), Error);
  CHECK_THROWS_AS(quad_overlap(f, f, 513), Error);
}

TEST_CASE("gauss_legendre matches the oracle rule") {
  const auto rule = gauss_legendre(64);
  const auto [x, w] = oracle::gauss_legendre(64);
  std::vector<double> xs = x, ws = w;
  // Compare as sets: sort both by node.
  std::vector<std::pair<double, double>> p1, p2;
  for (int i = 0; i < 64; ++i) {
    p1.emplace_back(rule.nodes[i], rule.weights[i]);
    p2.emplace_back(xs[i], ws[i]);
  }
  std::sort(p1.begin(), p1.end());
  std::sort(p2.begin(), p2.end());
  for (int i = 0; i < 64; ++i) {
    CHECK(std::abs(p1[i].first - p2[i].first) < 1e-14);
    CHECK(std::abs(p1[i].second - p2[i].second) < 1e-14);
  }
}
