#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "dstlab/fourier.hpp"
#include "dstlab/indefinite.hpp"
#include "dstlab/lightcone.hpp"
#include "dstlab/minkowski.hpp"
#include "dstlab/rng.hpp"
#include "dstlab/sea.hpp"

using namespace dstlab;

namespace {

// greedy nearest matching
bool same_multiset(const CVector& a, const CVector& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(static_cast<size_t>(b.size()), false);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < b.size(); ++j)
      if (!used[static_cast<size_t>(j)] && (best < 0 || std::abs(a[i] - b[j]) < std::abs(a[i] - b[best]))) best = j;
    if (std::abs(a[i] - b[best]) > tol) return false;
    used[static_cast<size_t>(best)] = true;
  }
  return true;
}

template <typename E>
ErrorCode code_of(E&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Validation;  // unreachable in the checks below
}

}  // namespace

TEST_CASE("Dirac matrices satisfy the Clifford relations") {
  const auto& g = dirac_gamma();
  const double eta[4] = {1, -1, -1, -1};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Mat4c ac = g[a] * g[b] + g[b] * g[a];
      const Mat4c expect = (a == b ? 2 * eta[a] : 0.0) * Mat4c::Identity();
      CHECK((ac - expect).norm() < 1e-14);
    }
  const Vec4 xi(0.3, -1.2, 0.4, 2.0);
  CHECK((slash(xi) * slash(xi) - minkowski_square(xi) * Mat4c::Identity()).norm() < 1e-13);
}

TEST_CASE("vector-scalar chain, timelike example") {
  VectorScalarKernel k{1.0, 1.0, Vec4(1, 0, 0, 0)};
  auto c = minkowski_chain(k);
  CHECK(c.a == doctest::Approx(2));
  CHECK(c.b == doctest::Approx(2));
  CVector expect(4);
  expect << 4, 4, 0, 0;
  CHECK(same_multiset(c.roots, expect, 1e-12));
  CHECK(c.causal.kind == CausalKind::Timelike);
  // chain matrix equals P(x,y) P(y,x)
  CHECK((c.matrix() - k.matrix() * k.swapped().matrix()).norm() < 1e-13);
  auto g = minkowski_gradient(k);
  CHECK(g.timelike);
  CHECK((g.M - 4.0 * dirac_gamma()[0]).norm() < 1e-12);
}

TEST_CASE("vector-scalar chain, spacelike example") {
  VectorScalarKernel k{1.0, 1.0, Vec4(0, 1, 0, 0)};
  auto c = minkowski_chain(k);
  CVector expect(4);
  expect << cplx(0, 2), cplx(0, 2), cplx(0, -2), cplx(0, -2);
  CHECK(same_multiset(c.roots, expect, 1e-12));
  CHECK(c.causal.kind == CausalKind::Spacelike);
  auto g = minkowski_gradient(k);
  CHECK_FALSE(g.timelike);
  CHECK(g.M.norm() == 0);
}

TEST_CASE("on the light cone the gradient is undefined") {
  VectorScalarKernel k{1.0, 0.5, Vec4(1, 1, 0, 0)};
  CHECK(code_of([&] { minkowski_gradient(k); }) == ErrorCode::LightConeUndefined);
}

TEST_CASE("Minkowski chain roots and gradient against generic matrix code") {
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    VectorScalarKernel k{cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal()),
                         Vec4(rng.normal(), rng.normal(), rng.normal(), rng.normal())};
    const Mat4c A = k.matrix() * k.swapped().matrix();
    auto c = minkowski_chain(k);
    Eigen::ComplexEigenSolver<Mat4c> es(A);
    CHECK(same_multiset(c.roots, es.eigenvalues(), 1e-8 * (1 + A.norm())));
    CHECK(c.causal.kind == (minkowski_square(k.xi) > 0 ? CausalKind::Timelike : CausalKind::Spacelike));
    if (minkowski_square(k.xi) > 0) {
      // generic gradient of the 4x4 chain with mu = 1/4
      auto g = minkowski_gradient(k);
      auto ref = lagrangian_gradient<double>(CMatrix(A), 0.25);
      CHECK((g.M - ref.M).norm() < 1e-6 * (1 + ref.M.norm()));
      CHECK(g.vector_form_error < 1e-10 * (1 + g.M.norm()));
      CHECK(g.symmetry_error < 1e-10 * (1 + g.M.norm()));
    }
  }
}

TEST_CASE("mass cone regions") {
  auto v = [](std::initializer_list<double> x) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
    Eigen::Index i = 0;
    for (double d : x) r[i++] = d;
    return r;
  };
  CHECK(mass_cone_classify(v({2, 1, 0, 0})) == ConeRegion::UpperCone);
  CHECK(mass_cone_classify(v({-2, 1, 0, 0})) == ConeRegion::LowerCone);
  CHECK(mass_cone_classify(v({1, 2, 0, 0})) == ConeRegion::Outside);
  CHECK(mass_cone_classify(v({1, 1, 0, 0})) == ConeRegion::Boundary);
  CHECK(mass_cone_classify(v({-3, 0})) == ConeRegion::LowerCone);
  CHECK(mass_cone_classify(v({0, 0})) == ConeRegion::Boundary);
}

TEST_CASE("convolution support in 1+1 dimensions") {
  SeaConfig seas{{1.0, 5.0, 20.0}, {1.0, 1e-4, 9.696e-6}};
  SUBCASE("symmetric interval at rest") {
    Eigen::VectorXd q(2);
    q << -3, 0;
    auto s = convolution_support(q, seas);
    REQUIRE(s.size() == 3);
    CHECK(s[0].rapidity_lo == doctest::Approx(-s[0].rapidity_hi));
    CHECK(s[0].p1_lo == doctest::Approx(-s[0].p1_hi));
    // (q - p)^2 = 0 at p = -(cosh s, sinh s): 9 - 6 cosh s + 1 = 0
    CHECK(s[0].half_width == doctest::Approx(std::acosh(10.0 / 6.0)));
  }
  SUBCASE("end points solve the light-cone quadratic") {
    Rng rng(77);
    for (int t = 0; t < 20; ++t) {
      const double Q = 0.5 + 30 * rng.uniform(), th = 3 * (2 * rng.uniform() - 1);
      Eigen::VectorXd q(2);
      q << -Q * std::cosh(th), -Q * std::sinh(th);
      for (const auto& sh : convolution_support(q, seas)) {
        for (double p1 : {sh.p1_lo, sh.p1_hi}) {
          const double p0 = -std::sqrt(sh.mass * sh.mass + p1 * p1);
          const double d0 = q[0] - p0, d1 = q[1] - p1;
          CHECK(std::abs(d0 * d0 - d1 * d1) < 1e-8 * (1 + q.squaredNorm()));
        }
        CHECK(sh.p1_lo <= sh.p1_hi);
      }
    }
  }
  SUBCASE("outside the lower cone") {
    Eigen::VectorXd q(2);
    q << 0, 1;
    CHECK(code_of([&] { convolution_support(q, seas); }) == ErrorCode::Unbounded);
    q << 3, 0;
    CHECK(code_of([&] { convolution_support(q, seas); }) == ErrorCode::Unbounded);
  }
  SUBCASE("support shrinks toward the vertex") {
    SeaConfig one{{1.0}, {1.0}};
    Eigen::VectorXd q(2);
    q << -1.001, 0;
    CHECK(convolution_support(q, one)[0].half_width < 0.1);
  }
}

TEST_CASE("sea configuration validation") {
  CHECK_THROWS_AS((SeaConfig{{2.0, 1.0}, {1.0, 1.0}}.validate()), Error);
  CHECK_THROWS_AS((SeaConfig{{1.0}, {0.0}}.validate()), Error);
  CHECK_THROWS_AS((SeaConfig{{}, {}}.validate()), Error);
}

namespace lc = dstlab::lightcone;

TEST_CASE("light-cone product coefficients") {
  using lc::Grade;
  using lc::Support;
  using lc::Symbol;
  auto P = lc::kernel_expansion();
  auto A = lc::closed_chain_expansion(P);
  const lc::Polynomial C0 = lc::Polynomial::symbol(Symbol::C0), C1 = lc::Polynomial::symbol(Symbol::C1),
                       C2 = lc::Polynomial::symbol(Symbol::C2), D3 = lc::Polynomial::symbol(Symbol::D3);
  const auto two = lc::Polynomial::constant({lc::Rational(2), lc::Rational(0)});

  CHECK(A.coefficient({Grade::Scalar, 3, 0, Support::Regular, false}) == C0 * C0);
  CHECK(A.coefficient({Grade::Scalar, 2, 0, Support::Regular, false}) == C1 * C1 + two * C0 * C2);
  CHECK(A.coefficient({Grade::Vector, 2, 0, Support::Theta, true}) == two * C0 * D3);
  // no slash / xi^6 term: the C0 C1 cross terms cancel
  CHECK(A.coefficient({Grade::Vector, 3, 0, Support::Regular, false}).is_zero());
  CHECK(A.valid_through() == -3);

  auto M = lc::trace_free_gradient(A);
  CHECK(M.coefficient({Grade::Vector, 2, 0, Support::Theta, true}) == two * two * C0 * D3);
  for (const auto& [k, c] : M.terms) CHECK(k.grade == Grade::Vector);
}

TEST_CASE("light-cone polynomial algebra") {
  using lc::Symbol;
  const auto C0 = lc::Polynomial::symbol(Symbol::C0);
  const auto iC1 = lc::Polynomial::symbol(Symbol::C1, {lc::Rational(0), lc::Rational(1)});
  CHECK((iC1 * iC1.conjugate()) == lc::Polynomial::symbol(Symbol::C1) * lc::Polynomial::symbol(Symbol::C1));
  auto p = C0 * C0 + iC1;
  auto q = p.substitute(Symbol::C0, lc::Rational(3, 2));
  CHECK(q.coefficient(lc::monomial({})) == lc::GaussRational{lc::Rational(9, 4), lc::Rational(0)});
  CHECK(q.coefficient(lc::monomial({{Symbol::C1, 1}})) == lc::GaussRational{lc::Rational(0), lc::Rational(1)});
  CHECK(lc::symbol_from_string("D2") == Symbol::D2);
  CHECK_THROWS_AS(lc::symbol_from_string("E1"), Error);
  CHECK((C0 * C0).to_string() == "C0^2");
}

TEST_CASE("distributional products of cone singularities are rejected") {
  auto P = lc::kernel_expansion();
  CHECK(code_of([&] { lc::multiply(P, P.conjugate(), lc::Region::Distributional); }) ==
        ErrorCode::UnimplementedProduct);
}

TEST_CASE("degree bookkeeping") {
  using lc::Grade;
  using lc::Support;
  CHECK((lc::TermKey{Grade::Vector, 2, 0, Support::Regular, false}.degree()) == -3);
  CHECK((lc::TermKey{Grade::Scalar, 0, 0, Support::DeltaPrime, true}.degree()) == -4);
  CHECK((lc::TermKey{Grade::Scalar, 0, 1, Support::Theta, true}.degree()) == 0);
}

TEST_CASE("regularized action") {
  SUBCASE("Gaussian profile against its closed form") {
    for (auto [m3, m5] : {std::pair{1.3, 0.7}, std::pair{1.0, 0.0}, std::pair{0.4, -2.0}}) {
      auto r = regularized_action(gaussian_profile(m3, m5));
      CHECK(r.converged);
      CHECK(r.max_rel_spread < 1e-6);
      const double exact = -std::sqrt(std::numbers::pi) * m3 * m3 - std::numbers::egamma * m3 * m5;
      CHECK(r.value == doctest::Approx(exact).epsilon(1e-6));
    }
  }
  SUBCASE("power law is exact") {
    for (double Z : {5.0, 0.5, 1.0}) {
      auto r = regularized_action(power_law_profile(1.2, 0.3, Z));
      const double exact = -1.44 / Z + 2 * 1.2 * 0.3 * std::log(Z);
      CHECK(r.value == doctest::Approx(exact).epsilon(1e-10));
    }
  }
  SUBCASE("no counter terms: plain integral") {
    SeaActionInput in;
    in.L = [](double z) { return std::exp(-z); };  // int z e^{-z} = 1
    CHECK(regularized_action(in).value == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("an extra 1/z tail cannot be regularized") {
    SeaActionInput in;
    in.m3 = 1.0;
    in.L = [](double z) { return (1.0 / (z * z) + 1.0 / z) * std::exp(-z * z) / z; };
    CHECK(code_of([&] { regularized_action(in); }) == ErrorCode::NotRegularizable);
  }
}

TEST_CASE("extended action and mass constraint") {
  RegularizationFreedom c;
  c.c3 = 1;
  CHECK(extended_action(0.5, 1, 1, nullptr, c, SeaConfig{{2.0}, {3.0}}) == doctest::Approx(48.5));
  CHECK(extended_action(0.5, 1, 1, nullptr, {}, SeaConfig{{2.0}, {3.0}}) == 0.5);
  auto F = [](double m3, double m5) { return m3 * m5; };
  CHECK(extended_action(0.0, 2, 3, F, {}, SeaConfig{{2.0}, {3.0}}) == doctest::Approx(6));
  SeaConfig fig{{1.0, 5.0, 20.0}, {1.0, 1e-4, 9.696e-6}};
  CHECK(mass_constraint(fig) == doctest::Approx(1.0 + 5e-12 + 20 * std::pow(9.696e-6, 3)).epsilon(1e-15));
}

TEST_CASE("state stability") {
  StateStabilityFunctions f;
  for (int i = 1; i <= 100; ++i) f.qsq.push_back(0.1 * i);
  SUBCASE("flat case is stable") {
    f.a.assign(100, 0.0);
    f.b.assign(100, 2.0);
    CHECK(state_stability_check(f, SeaConfig{{1.0, 2.0, 3.0}, {1, 1, 1}}).stable);
  }
  SUBCASE("single well") {
    for (double s : f.qsq) {
      f.a.push_back(1.0);
      f.b.push_back((s - 1) * (s - 1));
    }
    CHECK(state_stability_check(f, SeaConfig{{1.0}, {1.0}}).stable);
    auto v = state_stability_check(f, SeaConfig{{1.0, 2.0}, {1.0, 1.0}});
    CHECK_FALSE(v.stable);
    CHECK(v.violations.front().condition == "shell");
  }
  SUBCASE("negative a") {
    f.a.assign(100, 1.0);
    f.b.assign(100, 0.0);
    f.a[40] = -0.1;
    auto v = state_stability_check(f, SeaConfig{{1.0}, {1.0}});
    CHECK_FALSE(v.stable);
    CHECK(v.violations.front().condition == "a<0");
    CHECK(v.violations.front().cell == 40);
  }
  SUBCASE("shell outside the grid") {
    f.a.assign(100, 1.0);
    f.b.assign(100, 0.0);
    CHECK(code_of([&] { state_stability_check(f, SeaConfig{{5.0}, {1.0}}); }) == ErrorCode::GridCoverage);
  }
}

TEST_CASE("Fourier support of the gradient distribution") {
  auto zero = fourier_support_check([](double) { return 0.0; });
  CHECK(zero.leakage == 0);
  auto bump = [](double z) { return std::exp(-z); };
  FourierGrid g;
  g.N = 128;
  auto r128 = fourier_support_check(bump, g);
  g.N = 256;
  auto r256 = fourier_support_check(bump, g);
  CHECK(r256.leakage <= 1e-2);
  CHECK(r256.leakage < r128.leakage);
  CHECK_FALSE(r256.edge_warning);
  // a momentum shift along xi^1 moves energy out of the cone
  auto shifted = fourier_support_check(bump, g, 4.0);
  CHECK(shifted.leakage > 10 * r256.leakage);
}
