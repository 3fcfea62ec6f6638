#include <doctest.h>

#include <algorithm>

#include "ductmodes/eigensolver.hpp"
#include "support/oracles.hpp"

using namespace ductmodes;

namespace {

const cplx kBetaFig1(0.4, 0.2);
const cplx kBetaEp(0.099346, 0.042653);

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidArgument;
}

// Residual with oracle Bessel values, independent of the library.
double oracle_residual(const BoundarySpec& s, cplx g) {
  return std::abs(oracle::dispersion_lhs(s.m, g) - s.Y()) / std::max(1.0, std::abs(s.Y()));
}

}  // namespace

TEST_CASE("rigid_modes matches bisection roots") {
  const auto r02 = rigid_modes(0, 2);
  REQUIRE(r02.size() == 2);
  CHECK(r02[0] == 0.0);
  CHECK(std::abs(r02[1] - 3.831706) < 1e-6);
  const auto r03 = rigid_modes(0, 3);
  CHECK(std::abs(r03[2] - 7.015587) < 1e-6);
  CHECK(std::abs(rigid_modes(1, 1)[0] - 1.841184) < 1e-6);
  for (int m : {0, 1, 3, 8}) {
    const auto lib = rigid_modes(m, 8);
    const auto ref = oracle::rigid_roots(m, 8);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(lib[k] - ref[k]) < 1e-12);
  }
  CHECK(code_of([] { rigid_modes(0, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("bessel_zeros matches bisection roots") {
  for (int m : {0, 2, 5}) {
    const auto lib = bessel_zeros(m, 6);
    const auto ref = oracle::bessel_zeros(m, 6);
    for (int k = 0; k < 6; ++k) CHECK(std::abs(lib[k] - ref[k]) < 1e-12);
  }
}

TEST_CASE("find_modes rigid limit") {
  const ModeSet ms = find_modes(BoundarySpec::admittance(30, 0, 0.0), 3);
  REQUIRE(ms.modes.size() == 3);
  CHECK(std::abs(ms.modes[0].gamma) < 1e-12);
  CHECK(std::abs(ms.modes[1].gamma - 3.831706) < 1e-6);
  CHECK(std::abs(ms.modes[2].gamma - 7.015587) < 1e-6);
  for (int n = 0; n < 3; ++n) CHECK(ms.modes[n].n == n);
}

TEST_CASE("find_modes at beta0 = 0.4+0.2j: one surface mode among 30") {
  const BoundarySpec s = BoundarySpec::admittance(30, 0, kBetaFig1);
  const ModeSet ms = find_modes(s, 30);
  REQUIRE(ms.modes.size() == 30);
  int surface = 0;
  for (const Mode& md : ms.modes) {
    if (md.gamma.imag() > 3.0) ++surface;
    CHECK((md.cls == ModeClass::Surface) == (md.gamma.imag() > 3.0));
  }
  CHECK(surface == 1);
  CHECK(ms.zeros_in_rectangle == ms.roots_in_rectangle);
}

TEST_CASE("find_modes near the first EP returns a near-degenerate pair") {
  const ModeSet ms = find_modes(BoundarySpec::admittance(30, 0, kBetaEp), 2);
  REQUIRE(ms.modes.size() == 2);
  CHECK(std::abs(ms.modes[0].gamma - ms.modes[1].gamma) < 1e-2);
}

TEST_CASE("near-EP flag") {
  const ModeSet ms = find_modes(BoundarySpec::admittance(30, 0, cplx(0.0993460805, 0.0426534180)), 4);
  CHECK(ms.near_ep);
  CHECK_FALSE(ms.warnings.empty());
  CHECK_FALSE(find_modes(BoundarySpec::admittance(30, 0, kBetaFig1), 4).near_ep);
}

TEST_CASE("residual, ordering, branch rule and completeness over several walls") {
  const std::vector<BoundarySpec> specs = {
      BoundarySpec::admittance(30, 0, kBetaFig1),  BoundarySpec::admittance(30, 0, cplx(0.0, 10.0)),
      BoundarySpec::admittance(30, 1, cplx(0.2, -0.1)), BoundarySpec::admittance(10, 3, cplx(1.0, 0.5)),
      BoundarySpec::admittance(30, 0, 1.0 / cplx(0.1, -1.0)), BoundarySpec::admittance(30, 14, kBetaFig1),
  };
  for (const BoundarySpec& s : specs) {
    CAPTURE(s.m);
    CAPTURE(s.beta0);
    const ModeSet ms = find_modes(s, 20);
    REQUIRE(ms.modes.size() == 20);
    CHECK(ms.zeros_in_rectangle == ms.roots_in_rectangle);
    for (std::size_t k = 0; k < ms.modes.size(); ++k) {
      const Mode& md = ms.modes[k];
      CHECK(md.n == static_cast<int>(k));
      CHECK(md.residual <= 1e-9 * std::max(1.0, std::abs(s.Y())));
      if (md.gamma.imag() < 30.0 && std::abs(md.gamma) > 1e-3) CHECK(oracle_residual(s, md.gamma) < 1e-8);
      CHECK(md.k_axial.imag() <= 1e-12);
      if (k > 0) {
        const cplx a = ms.modes[k - 1].gamma;
        CHECK((a.real() < md.gamma.real() || (a.real() == md.gamma.real() && a.imag() <= md.gamma.imag())));
      }
    }
  }
}

TEST_CASE("self-adjoint limits give real gamma^2") {
  for (cplx beta : {cplx(0.0), cplx(0.0, 0.3), cplx(0.0, -0.3), cplx(0.0, 10.0)}) {
    const ModeSet ms = find_modes(BoundarySpec::admittance(30, 0, beta), 12);
    for (const Mode& md : ms.modes) {
      const cplx g2 = md.gamma * md.gamma;
      CHECK(std::abs(g2.imag()) <= 1e-9 * std::max(1.0, std::abs(g2)));
    }
  }
}

TEST_CASE("pressure-release wall through the impedance form") {
  const ModeSet ms = find_modes(BoundarySpec::with_impedance(30, 0, 0.0), 6);
  const auto ref = oracle::bessel_zeros(0, 6);
  for (int k = 0; k < 6; ++k) CHECK(std::abs(ms.modes[k].gamma - ref[k]) < 1e-10);
  const ModeSet ms2 = find_modes(BoundarySpec::with_impedance(30, 2, 0.0), 4);
  const auto ref2 = oracle::bessel_zeros(2, 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(ms2.modes[k].gamma - ref2[k]) < 1e-10);
}

TEST_CASE("impedance and admittance forms agree") {
  const cplx z(0.1, -1.0);
  const ModeSet a = find_modes(BoundarySpec::admittance(30, 0, 1.0 / z), 15);
  const ModeSet b = find_modes(BoundarySpec::with_impedance(30, 0, z), 15);
  for (int k = 0; k < 15; ++k) CHECK(std::abs(a.modes[k].gamma - b.modes[k].gamma) < 1e-9);
}

TEST_CASE("classify") {
  CHECK(classify(cplx(3.83, 0.1), 3.0) == ModeClass::Guided);
  CHECK(classify(cplx(2.0, 5.0), 3.0) == ModeClass::Surface);
  CHECK(classify(cplx(2.0, 5.0), 6.0) == ModeClass::Guided);
}

TEST_CASE("axial_wavenumber branch rule") {
  CHECK(std::abs(axial_wavenumber(30, 0.0) - 30.0) < 1e-14);
  CHECK(std::abs(axial_wavenumber(30, 30.0)) < 1e-14);
  const cplx k = axial_wavenumber(30, 40.0);
  CHECK(std::abs(k - cplx(0.0, -std::sqrt(700.0))) < 1e-12);
  for (cplx g : {cplx(5.0, 0.3), cplx(5.0, -0.3), cplx(40.0, 2.0), cplx(12.0, 6.5)}) {
    const cplx kk = axial_wavenumber(30, g);
    CHECK(kk.imag() <= 0.0);
    CHECK(std::abs(kk * kk - (900.0 - g * g)) < 1e-10 * std::max(1.0, std::abs(kk * kk)));
  }
}

TEST_CASE("count_zeros on a rigid wall") {
  const BoundarySpec s = BoundarySpec::admittance(30, 0, 0.0);
  // Rigid roots 0, 3.83, 7.02 lie in this box; 0 is a double root in gamma.
  const int n = count_zeros(s, Rect{-0.5, 8.0, -1.0, 1.0});
  CHECK(n >= 3);
  CHECK(count_zeros(s, Rect{4.5, 6.5, -1.0, 1.0}) == 0);
}

TEST_CASE("track_path zero-length continuation") {
  const BoundarySpec s = BoundarySpec::admittance(30, 0, kBetaFig1);
  const ModeSet seed = find_modes(s, 6);
  const auto out = track_path(s, {kBetaFig1, kBetaFig1}, seed);
  REQUIRE(out.size() == 2);
  for (int k = 0; k < 6; ++k) CHECK(out[0].modes[k].gamma == out[1].modes[k].gamma);
  for (int k = 0; k < 6; ++k) CHECK(std::abs(out[0].modes[k].gamma - seed.modes[k].gamma) < 1e-12);
}

TEST_CASE("track_path endpoint matches find_modes") {
  const BoundarySpec s0 = BoundarySpec::admittance(30, 0, 0.0);
  const int n = 10;
  const ModeSet seed = find_modes(s0, n);
  std::vector<cplx> path;
  for (int k = 1; k <= 40; ++k) path.push_back(kBetaFig1 * (k / 40.0));
  const auto out = track_path(s0, path, seed);
  const ModeSet direct = find_modes(BoundarySpec::admittance(30, 0, kBetaFig1), n + 4);
  for (const Mode& md : out.back().modes) {
    const cplx g = canonical_root(md.gamma);
    double best = 1e300;
    for (const Mode& d : direct.modes) best = std::min(best, std::abs(g - d.gamma));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("track_path along the Fig. 3 row shows the exchange near Re(beta0) = 0.0993") {
  const BoundarySpec s0 = BoundarySpec::admittance(30, 0, 0.0);
  const ModeSet seed = find_modes(s0, 2);
  std::vector<cplx> path{{0.095, 0.0}, {0.095, 0.042655}};
  for (int k = 0; k <= 200; ++k) path.emplace_back(0.095 + 0.01 * k / 200.0, 0.042655);
  const auto out = track_path(s0, path, seed);
  double best = 1e300, at = 0.0;
  for (std::size_t k = 2; k < out.size(); ++k) {
    const double d = std::abs(out[k].modes[0].gamma.real() - out[k].modes[1].gamma.real());
    if (d < best) {
      best = d;
      at = path[k].real();
    }
  }
  CHECK(std::abs(at - 0.0993) < 2e-4);
  // Mode identity is carried by continuity, so the Re(gamma) curves cross there.
  const double before = out[2].modes[0].gamma.real() - out[2].modes[1].gamma.real();
  const double after = out.back().modes[0].gamma.real() - out.back().modes[1].gamma.real();
  CHECK(before * after < 0.0);
}

TEST_CASE("track_path step collapse") {
  const BoundarySpec s0 = BoundarySpec::admittance(30, 0, 0.0);
  const ModeSet seed = find_modes(s0, 4);
  TrackOptions opts;
  opts.max_substeps = 1;
  CHECK(code_of([&] { track_path(s0, {cplx(5.0, 5.0)}, seed, opts); }) == ErrorCode::StepCollapse);
}

TEST_CASE("input validation") {
  CHECK(code_of([] { find_modes(BoundarySpec::admittance(-1, 0, 0.0), 3); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { find_modes(BoundarySpec::admittance(30, -1, 0.0), 3); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { find_modes(BoundarySpec::admittance(30, 0, 0.0), 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { find_modes(BoundarySpec::admittance(30, 0, cplx(NAN, 0.0)), 3); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { BoundarySpec::with_impedance(30, 0, 0.0).Y(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Y is derived from beta0") {
  BoundarySpec s = BoundarySpec::admittance(30, 0, cplx(0.1, 0.2));
  CHECK(std::abs(s.Y() - cplx(0.0, -30.0) * cplx(0.1, 0.2)) < 1e-15);
  s.beta0 = cplx(0.3, 0.0);
  CHECK(std::abs(s.Y() - cplx(0.0, -9.0)) < 1e-15);
}
