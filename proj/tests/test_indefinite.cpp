#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unsupported/Eigen/MatrixFunctions>

#include "dstlab/indefinite.hpp"
#include "dstlab/rng.hpp"

using namespace dstlab;

namespace {

double L_of(const CMatrix& A, double mu) { return lagrangian<double>(chain_roots<double>(A), mu); }

// central differences in the direction E
double dL(const CMatrix& A, const CMatrix& E, double mu, double h = 1e-6) {
  return (L_of(A + h * E, mu) - L_of(A - h * E, mu)) / (2 * h);
}

CMatrix random_complex(int d, Rng& rng) {
  CMatrix A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = cplx(rng.normal(), rng.normal());
  return A;
}

}  // namespace

TEST_CASE("signature layout per point") {
  DiscreteSpacetime s(2, 2);
  RVector expect(8);
  expect << 1, 1, -1, -1, 1, 1, -1, -1;
  CHECK(s.signature() == expect);
  CHECK(s.dim() == 8);
  CHECK_THROWS_AS(s.check_point(2), Error);
  CHECK_THROWS_AS(DiscreteSpacetime(0, 3), Error);
}

TEST_CASE("random projectors are idempotent, self-adjoint and of rank f") {
  for (auto [n, m, f] : {std::tuple{1, 4, 2}, std::tuple{2, 3, 4}, std::tuple{1, 5, 5}}) {
    DiscreteSpacetime s(n, m);
    auto P = random_projector(s, f, 11);
    CHECK(P.idempotency_defect() < 1e-9);
    CHECK(P.adjointness_defect() < 1e-9);
    CHECK(P.gram_defect() < 1e-9);
    CHECK(std::abs(P.matrix().trace() - cplx(f, 0)) < 1e-9);
    // image negative definite: <u|u> = u^dag S u < 0 for every image vector
    const CMatrix U = P.basis();
    const CMatrix G = U.adjoint() * s.signature().asDiagonal() * U;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(G);
    CHECK(es.eigenvalues().maxCoeff() < 0);
  }
}

TEST_CASE("projector validation") {
  DiscreteSpacetime s(1, 2);
  CMatrix bad = CMatrix::Zero(4, 1);
  bad(0, 0) = 1;  // positive-norm vector
  CHECK_THROWS_AS(FermionicProjector(s, bad), Error);
  CHECK_THROWS_AS(random_projector(s, 3, 1), Error);
  CMatrix wrong_rows = CMatrix::Zero(3, 1);
  CHECK_THROWS_AS(FermionicProjector(s, wrong_rows), Error);
  auto Z = FermionicProjector::zero(s);
  CHECK(Z.f() == 0);
  CHECK(Z.matrix().norm() == 0);
}

TEST_CASE("random projectors are reproducible per seed") {
  DiscreteSpacetime s(1, 4);
  CHECK(random_projector(s, 2, 5).basis() == random_projector(s, 2, 5).basis());
  CHECK(random_projector(s, 2, 5).basis() != random_projector(s, 2, 6).basis());
}

TEST_CASE("f = nm: invariants hold but the action depends on the seed") {
  DiscreteSpacetime s(1, 4);
  std::vector<double> S;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto P = random_projector(s, 4, seed);
    CHECK(P.idempotency_defect() < 1e-9);
    CHECK(std::abs(P.matrix().trace() - cplx(4, 0)) < 1e-9);
    S.push_back(action(P, 0.5));
  }
  CHECK(*std::max_element(S.begin(), S.end()) - *std::min_element(S.begin(), S.end()) > 0.1);
}

TEST_CASE("discrete kernel is the block of P") {
  DiscreteSpacetime s(1, 3);
  auto P = random_projector(s, 2, 3);
  const CMatrix K = P.matrix();
  CHECK((discrete_kernel(P, 0, 2) - K.block(0, 4, 2, 2)).norm() < 1e-14);
  CHECK_THROWS_AS(discrete_kernel(P, 0, 3), Error);
}

TEST_CASE("closed chain roots satisfy trace and determinant") {
  DiscreteSpacetime s(1, 3);
  auto P = random_projector(s, 2, 8);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      auto c = closed_chain(P, x, y);
      CHECK(std::abs(c.roots.sum() - c.matrix.trace()) < 1e-12);
      CHECK(std::abs(c.roots.prod() - c.matrix.determinant()) < 1e-12);
    }
}

TEST_CASE("critical Lagrangian equals the pairwise spread") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const int k = t % 2 ? 4 : 2;
    CVector r(k);
    for (int i = 0; i < k; ++i) r[i] = cplx(rng.normal(), rng.normal());
    const double lhs = lagrangian<double>(r, 1.0 / k);
    CHECK(lhs == doctest::Approx(lagrangian_pairwise<double>(r)).epsilon(1e-12));
  }
}

TEST_CASE("gradient of the Lagrangian, hand cases") {
  CMatrix A = CMatrix::Zero(2, 2);
  SUBCASE("opposite sign roots") {
    A(0, 0) = 3;
    A(1, 1) = -1;
    auto g = lagrangian_gradient<double>(A, 0.5);
    CHECK(std::abs(g.M(0, 0) - cplx(2, 0)) < 1e-12);
    CHECK(std::abs(g.M(1, 1) - cplx(2, 0)) < 1e-12);
    CHECK(std::abs(g.M(0, 1)) < 1e-12);
  }
  SUBCASE("same sign roots: 2A - Tr(A)") {
    A(0, 0) = 3;
    A(1, 1) = 1;
    auto g = lagrangian_gradient<double>(A, 0.5);
    CHECK(std::abs(g.M(0, 0) - cplx(2, 0)) < 1e-12);
    CHECK(std::abs(g.M(1, 1) - cplx(-2, 0)) < 1e-12);
  }
}

TEST_CASE("gradient matches central differences on random chains") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const int d = t % 2 ? 4 : 2;
    const CMatrix A = random_complex(d, rng);
    const double mu = 0.3 + 0.1 * (t % 3);
    auto g = lagrangian_gradient<double>(A, mu);
    CHECK_FALSE(g.fallback);
    for (int i = 0; i < 3; ++i) {
      const CMatrix E = random_complex(d, rng);
      CHECK((g.M * E).trace().real() == doctest::Approx(dL(A, E, mu)).epsilon(1e-6));
    }
  }
}

TEST_CASE("zero roots and defective chains") {
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = 1;  // one zero root
  auto g = lagrangian_gradient<double>(A, 0.5);
  CHECK_FALSE(g.fallback);
  // 2|l| - 2 mu sum|l| on the nonzero root, nothing from the kink at 0
  CHECK(std::abs(g.M(0, 0) - cplx(1, 0)) < 1e-12);
  CHECK(std::abs(g.M(1, 1)) < 1e-12);
  // central differences see the same symmetric derivative
  Rng rng(8);
  for (int i = 0; i < 3; ++i) {
    const CMatrix E = random_complex(2, rng);
    CHECK((g.M * E).trace().real() == doctest::Approx(dL(A, E, 0.5)).epsilon(1e-5));
  }
  CMatrix J = CMatrix::Zero(2, 2);
  J(0, 0) = 1;
  J(0, 1) = 1;
  J(1, 1) = 1;  // Jordan block, non-diagonalizable
  CHECK(lagrangian_gradient<double>(J, 0.5).fallback);
}

TEST_CASE("rank-one kernels: first variation with small chains") {
  // f = 1 makes every chain rank one; some chains are tiny
  Rng rng(55);
  DiscreteSpacetime s(1, 4);
  for (int t = 0; t < 10; ++t) {
    auto P = random_projector(s, 1, 2000 + t);
    const CMatrix B = random_self_adjoint(s, rng, 0.5);
    const double h = 1e-5;
    const double fd = (action(conjugate_by_exp(P, B, h), 0.4) - action(conjugate_by_exp(P, B, -h), 0.4)) / (2 * h);
    CHECK(first_variation<double>(P.matrix(), q_kernel(P, 0.4).Q, B) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("first variation matches the derivative along exp(i eta B)") {
  DiscreteSpacetime s(1, 3);
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    auto P = random_projector(s, 2, 100 + t);
    const double mu = 0.25 + 0.05 * t;
    const CMatrix B = random_self_adjoint(s, rng, 0.5);
    const double h = 1e-5;
    const double fd = (action(conjugate_by_exp(P, B, h), mu) - action(conjugate_by_exp(P, B, -h), mu)) / (2 * h);
    const auto Q = q_kernel(P, mu);
    CHECK(first_variation<double>(P.matrix(), Q.Q, B) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("conjugation keeps the projector properties") {
  DiscreteSpacetime s(1, 4);
  Rng rng(9);
  auto P = random_projector(s, 2, 1);
  const CMatrix B = random_self_adjoint(s, rng, 1.0);
  auto P2 = conjugate_by_exp(P, B, 0.7);
  CHECK(P2.idempotency_defect() < 1e-9);
  CHECK(P2.gram_defect() < 1e-9);
  // independent: P2 = U P U^-1 with U = exp(i 0.7 B)
  const CMatrix U = (cplx(0, 0.7) * B).exp();
  CHECK((P2.matrix() - U * P.matrix() * U.inverse()).norm() < 1e-9);
}

TEST_CASE("B from random_self_adjoint is self-adjoint for the indefinite product") {
  DiscreteSpacetime s(2, 2);
  Rng rng(2);
  const CMatrix B = random_self_adjoint(s, rng, 1.0);
  const RVector sig = s.signature();
  CHECK((sig.asDiagonal() * B.adjoint() * sig.asDiagonal() - B).norm() < 1e-12);
}

TEST_CASE("gauge transforms") {
  DiscreteSpacetime s(1, 4);
  auto P = random_projector(s, 2, 4);
  auto U = random_gauge(s, 17);
  auto P2 = gauge_transform(P, U);
  CHECK(action(P2, 0.5) == doctest::Approx(action(P, 0.5)).epsilon(1e-10));
  CHECK(constraint_value(P2) == doctest::Approx(constraint_value(P)).epsilon(1e-10));
  CHECK(el_residual(P2, 0.5) == doctest::Approx(el_residual(P, 0.5)).epsilon(1e-9));
  // the Frobenius norm of the commutator is not gauge invariant, which is why el_residual avoids it
  auto frob = [](const FermionicProjector& R) {
    const CMatrix K = R.matrix(), Q = q_kernel(R, 0.5).Q;
    return (K * Q - Q * K).norm();
  };
  CHECK(std::abs(frob(P2) - frob(P)) > 1e-6 * frob(P));
  GaugeTransform bad = U;
  bad.blocks[1] *= 2.0;
  CHECK_THROWS_AS(gauge_transform(P, bad), Error);
}

TEST_CASE("EL residual is large at a random projector") {
  DiscreteSpacetime s(1, 4);
  auto P = random_projector(s, 2, 4);
  CHECK(el_residual(P, 0.5) > 1e-3);
  // f = 2n: every local state matrix has full rank, so the residual only vanishes with the commutator
  const CMatrix K = P.matrix(), Q = q_kernel(P, 0.5).Q;
  CHECK(commutator_norm(P, CMatrix(K * Q - Q * K)) == el_residual(P, 0.5));
  CHECK(commutator_norm(P, CMatrix::Zero(8, 8).eval()) == 0);
}

TEST_CASE("long double instantiation") {
  DiscreteSpacetime s(1, 2);
  auto P = random_projector(s, 1, 3);
  FermionicProjectorT<long double> Pl(s, P.basis().cast<std::complex<long double>>());
  CHECK(static_cast<double>(Pl.idempotency_defect()) < 1e-9);
  CHECK(static_cast<double>(action(Pl, 0.5L)) == doctest::Approx(action(P, 0.5)).epsilon(1e-10));
}
