#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dstlab/lattice.hpp"

using namespace dstlab;

namespace {

LatticeOccupation pair_at(double t1, double t2) {
  return {OccupiedState{-1, 1, 1.0, t1}, OccupiedState{-2, 2, 1.0, t2}};
}

}  // namespace

TEST_CASE("radial kernels and their small-argument limits") {
  CHECK(kernel_k0(0) == 1.0);
  CHECK(kernel_k1(0) == cplx(0, 0));
  for (double x : {0.5, 2.0, 7.3}) {
    CHECK(kernel_k0(x) == doctest::Approx(std::sin(x) / x));
    CHECK(kernel_k1(x).imag() == doctest::Approx(std::sin(x) / (x * x) - std::cos(x) / x));
  }
  // series and closed form agree across the switch
  const double a = 0.99e-4, b = 1.01e-4;
  CHECK(kernel_k0(a) == doctest::Approx(kernel_k0(b)).epsilon(1e-8));
  CHECK(kernel_k1(a).imag() / a == doctest::Approx(kernel_k1(b).imag() / b).epsilon(1e-6));
}

TEST_CASE("dual lattice bounds") {
  LatticeGeometry g;
  CHECK(g.contains_dual(0, 1));
  CHECK(g.contains_dual(-7, 6));
  CHECK_FALSE(g.contains_dual(1, 1));
  CHECK_FALSE(g.contains_dual(-8, 1));
  CHECK_FALSE(g.contains_dual(0, 0));
  CHECK_THROWS_AS(lattice_kernel(g, {OccupiedState{-8, 1, 1.0, 0.0}}, 0, 0), Error);
  CHECK_THROWS_AS((LatticeGeometry{0, 6, PhaseConvention::Dft}.validate()), Error);
}

TEST_CASE("kernel structure") {
  LatticeGeometry g;
  const auto& gam = dirac_gamma();
  SUBCASE("no boost: no gamma^1 component") {
    const Mat4c P = lattice_kernel(g, pair_at(0, 0), 3, 2);
    CHECK(std::abs((P * gam[1]).trace()) < 1e-13);
  }
  SUBCASE("one state: components follow v, phi and the kernels") {
    OccupiedState s{-1, 2, 0.7, 0.4};
    const int i = 3, j = 2;
    const Mat4c P = lattice_kernel(g, {s}, i, j);
    const double x = 2.0 * 2.0 * std::numbers::pi * j / g.Nr;
    const cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * i / g.Nt);
    // Tr(P gamma^0)/4 = phase v0 K0, Tr(P)/4 = phase phi K0
    CHECK(std::abs((P * gam[0]).trace() / 4.0 - phase * s.v0() * kernel_k0(x)) < 1e-13);
    CHECK(std::abs(P.trace() / 4.0 - phase * s.phi * kernel_k0(x)) < 1e-13);
    // Tr(P gamma^1)/4 = -phase vr K1 since (gamma^1)^2 = -1
    CHECK(std::abs((P * gam[1]).trace() / 4.0 + phase * s.vr() * kernel_k1(x)) < 1e-13);
  }
  SUBCASE("DFT phases are periodic in the time index") {
    CHECK((lattice_kernel(g, pair_at(0.3, -0.2), 1, 2) - lattice_kernel(g, pair_at(0.3, -0.2), 1 + g.Nt, 2)).norm() < 1e-12);
  }
  SUBCASE("literal phases on the 2 pi lattice are trivial") {
    LatticeGeometry lit{8, 6, PhaseConvention::Literal};
    CHECK((lattice_kernel(lit, pair_at(0.3, -0.2), 0, 2) - lattice_kernel(lit, pair_at(0.3, -0.2), 5, 2)).norm() < 1e-12);
  }
}

TEST_CASE("lattice action basics") {
  LatticeGeometry g;
  auto w = lattice_weights(g);
  CHECK(w.rho_t.size() == 8);
  CHECK(w.rho_r[0] == doctest::Approx(1.0 / 12.0));
  CHECK(w.rho_r[3] == 9.0);
  CHECK(lattice_action(g, {}, w).S == 0);

  auto occ = pair_at(0.3, 0.8);
  const double S1 = lattice_action(g, occ, w).S;
  for (auto& s : occ) s.phi *= 2;
  // A scales with phi^2 and the Lagrangian is quadratic in A
  CHECK(lattice_action(g, occ, w).S == doctest::Approx(16 * S1).epsilon(1e-10));

  auto a = lattice_action(g, pair_at(0.3, 0.8), w);
  CHECK(a.eigen_failures == 0);
  double sum = 0;
  for (int i = 0; i < g.Nt; ++i)
    for (int j = 0; j < g.Nr; ++j) sum += w.rho_t[i] * w.rho_r[j] * a.L(i, j);
  CHECK(sum == doctest::Approx(a.S).epsilon(1e-12));
  CHECK(a.L.minCoeff() >= -1e-12);  // critical Lagrangian is a sum of squares

  CHECK_THROWS_AS(lattice_action(g, occ, lattice_weights(LatticeGeometry{4, 6, PhaseConvention::Dft})), Error);
}

TEST_CASE("weight presets") {
  LatticeGeometry g;
  CHECK(weight_preset_from_string(to_string(WeightPreset::LinearRadial)) == WeightPreset::LinearRadial);
  CHECK_THROWS_AS(weight_preset_from_string("cubic"), Error);
  auto u = lattice_weights(g, WeightPreset::Uniform);
  for (double r : u.rho_t) CHECK(r == 1.0);
  auto l = lattice_weights(g, WeightPreset::LinearRadial);
  CHECK(l.rho_r[4] == 4.0);
  CHECK(l.rho_t[1] == 2.0);
  CHECK(phase_convention_from_string("literal") == PhaseConvention::Literal);
}

TEST_CASE("trace condition") {
  auto occ = pair_at(0.1, 0.2);
  occ[1].phi = 3;
  CHECK(trace_condition(occ) == 4);
  auto e = enforce_trace(occ, 1.0);
  CHECK(trace_condition(e) == doctest::Approx(1.0));
  CHECK(e[1].phi / e[0].phi == doctest::Approx(3.0));
  CHECK_THROWS_AS(enforce_trace({}, 1.0), Error);
}

TEST_CASE("landscape symmetry and the origin") {
  LatticeGeometry g;
  auto w = lattice_weights(g);
  for (auto [t1, t2] : {std::pair{0.4, 1.1}, std::pair{-1.5, 0.2}, std::pair{2.0, -0.7}}) {
    const double a = lattice_action(g, pair_at(t1, t2), w).S;
    const double b = lattice_action(g, pair_at(-t1, -t2), w).S;
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
  // the origin is stationary
  const double h = 1e-5;
  const double d1 = (lattice_action(g, pair_at(h, 0), w).S - lattice_action(g, pair_at(-h, 0), w).S) / (2 * h);
  const double d2 = (lattice_action(g, pair_at(0, h), w).S - lattice_action(g, pair_at(0, -h), w).S) / (2 * h);
  const double S0 = lattice_action(g, pair_at(0, 0), w).S;
  CHECK(std::abs(d1) < 1e-6 * std::max(1.0, S0));
  CHECK(std::abs(d2) < 1e-6 * std::max(1.0, S0));
}

TEST_CASE("landscape scan bookkeeping") {
  LatticeGeometry g;
  auto w = lattice_weights(g);
  auto tau = linspace(-1, 1, 7);
  CHECK(tau[3] == 0.0);
  auto s1 = landscape_scan_2d(g, pair_at(0, 0), tau, w, 1);
  auto s4 = landscape_scan_2d(g, pair_at(0, 0), tau, w, 4);
  CHECK(s1.S == s4.S);
  CHECK(s1.origin.i == 3);
  CHECK(s1.origin.j == 3);
  CHECK(s1.S(2, 5) == doctest::Approx(lattice_action(g, pair_at(tau[2], tau[5]), w).S).epsilon(1e-14));
  for (const auto& m : s1.local_minima) CHECK(m.S >= s1.global_min.S);
  CHECK_THROWS_AS(landscape_scan_2d(g, {OccupiedState{}}, tau, w), Error);
}
