#include "dstlab/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dstlab {

const std::array<Mat2c, 3>& pauli() {
  static const std::array<Mat2c, 3> s = [] {
    std::array<Mat2c, 3> p;
    p[0] << 0, 1, 1, 0;
    p[1] << 0, cplx(0, -1), cplx(0, 1), 0;
    p[2] << 1, 0, 0, -1;
    return p;
  }();
  return s;
}

Mat2c correlation_matrix(const FermionicProjector& P, int x) {
  if (P.space().n != 1 || P.f() != 2)
    throw Error(ErrorCode::Validation, "local correlations need n = 1 and f = 2");
  const CMatrix U = P.local(x);
  Mat2c s = Mat2c::Identity();
  s(1, 1) = -1;
  return -(U.adjoint() * s * U);
}

Mat2c correlation_matrix(double rho, const Vec3& v) {
  const auto& p = pauli();
  return 0.5 * (rho * Mat2c::Identity() + v[0] * p[0] + v[1] * p[1] + v[2] * p[2]);
}

LocalCorrelation local_correlations(const FermionicProjector& P) {
  LocalCorrelation L;
  const auto& p = pauli();
  for (int x = 0; x < P.space().m; ++x) {
    const Mat2c F = correlation_matrix(P, x);
    L.rho.push_back(F.trace().real());
    L.v.emplace_back((F * p[0]).trace().real(), (F * p[1]).trace().real(), (F * p[2]).trace().real());
  }
  return L;
}

double sum_rule_defect(const LocalCorrelation& L) {
  double r = 0;
  Vec3 v = Vec3::Zero();
  for (int x = 0; x < L.m(); ++x) {
    r += L.rho[x];
    v += L.v[x];
  }
  return std::max(std::abs(r - 2.0), v.cwiseAbs().maxCoeff());
}

double signature_defect(const LocalCorrelation& L) {
  double d = 0;
  for (int x = 0; x < L.m(); ++x) d = std::max(d, L.rho[x] - L.v[x].norm());
  return d;
}

double lambda_discriminant(double rx, const Vec3& vx, double ry, const Vec3& vy) {
  return (rx * vy + ry * vx).squaredNorm() - vx.cross(vy).squaredNorm();
}

std::pair<cplx, cplx> lambda_pm(double rx, const Vec3& vx, double ry, const Vec3& vy) {
  const double base = rx * ry + vx.dot(vy);
  const double disc = lambda_discriminant(rx, vx, ry, vy);
  const cplx root = disc >= 0 ? cplx(std::sqrt(disc), 0) : cplx(0, std::sqrt(-disc));
  return {0.25 * (base + root), 0.25 * (base - root)};
}

FermionicProjector projector_from_correlations(const LocalCorrelation& L) {
  const int m = L.m();
  if (sum_rule_defect(L) > 1e-10) throw Error(ErrorCode::Validation, "correlations violate sum rho = 2, sum v = 0");
  DiscreteSpacetime s(1, m);
  CMatrix basis(2 * m, 2);
  for (int x = 0; x < m; ++x) {
    const double len = L.v[x].norm();
    if (len + 1e-12 < std::abs(L.rho[x]))
      throw Error(ErrorCode::Validation, "|v_x| < |rho_x| has no realization with signature (1,1)");
    Eigen::SelfAdjointEigenSolver<Mat2c> es(correlation_matrix(L.rho[x], L.v[x]));
    // ascending: -b then a
    const double b = std::max(0.0, -es.eigenvalues()[0]);
    const double a = std::max(0.0, es.eigenvalues()[1]);
    Mat2c V;
    V.col(0) = es.eigenvectors().col(1);
    V.col(1) = es.eigenvectors().col(0);
    Mat2c D;
    D << 0, std::sqrt(b), std::sqrt(a), 0;
    basis.middleRows(2 * x, 2) = D * V.adjoint();
  }
  return FermionicProjector(s, basis);
}

LocalCorrelation triangle_family(double v) {
  LocalCorrelation L;
  for (int x = 0; x < 3; ++x) {
    const double phi = 2.0 * std::numbers::pi * x / 3.0;
    L.rho.push_back(2.0 / 3.0);
    L.v.emplace_back(v * std::cos(phi), v * std::sin(phi), 0.0);
  }
  return L;
}

FermionicProjector triangle_projector(double v) { return projector_from_correlations(triangle_family(v)); }

LocalCorrelation regular_tetrahedron(double length, double rho) {
  LocalCorrelation L;
  const double c = length / std::sqrt(3.0);
  for (const Vec3& d : {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)}) {
    L.rho.push_back(rho);
    L.v.push_back(c * d);
  }
  return L;
}

GeometryReport geometry_diagnostics(const LocalCorrelation& L) {
  const int m = L.m();
  if (m < 2) throw Error(ErrorCode::Validation, "geometry needs m >= 2");
  GeometryReport g;
  const double target = 2.0 / m;
  double mn = std::numeric_limits<double>::infinity(), mx = 0;
  for (int x = 0; x < m; ++x) {
    const double len = L.v[x].norm();
    g.lengths.push_back(len);
    if (len < 1e-12) g.degenerate.push_back(x);
    mn = std::min(mn, len);
    mx = std::max(mx, len);
    g.max_rel_dev_2_over_m = std::max(g.max_rel_dev_2_over_m, std::abs(len - target) / target);
  }
  g.mean_length = std::accumulate(g.lengths.begin(), g.lengths.end(), 0.0) / m;
  g.length_spread = g.mean_length > 0 ? (mx - mn) / g.mean_length : 0.0;
  g.cosines = RMatrix::Constant(m, m, std::numeric_limits<double>::quiet_NaN());
  g.min_angle = std::numbers::pi;
  auto bad = [&](int x) { return std::find(g.degenerate.begin(), g.degenerate.end(), x) != g.degenerate.end(); };
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      if (bad(x) || bad(y)) continue;
      const double c = std::clamp(L.v[x].dot(L.v[y]) / (g.lengths[x] * g.lengths[y]), -1.0, 1.0);
      g.cosines(x, y) = c;
      if (x < y) {
        g.min_angle = std::min(g.min_angle, std::acos(c));
        if (m <= 4) g.simplex_error = std::max(g.simplex_error, std::abs(c + 1.0 / (m - 1)));
      }
    }
  }
  return g;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Realized: return "Realized";
    case Verdict::NotRealized: return "NotRealized";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Mat3 kabsch_rotation(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  Mat3 H = Mat3::Zero();
  for (size_t i = 0; i < a.size(); ++i) H += a[i] * b[i].transpose();
  Eigen::JacobiSVD<Mat3> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 U = svd.matrixU(), V = svd.matrixV();
  Mat3 D = Mat3::Identity();
  D(2, 2) = (V * U.transpose()).determinant() < 0 ? -1.0 : 1.0;
  return V * D * U.transpose();
}

SymmetryReport test_permutation(const LocalCorrelation& L, const std::vector<int>& perm, double tol) {
  const int m = L.m();
  SymmetryReport r;
  r.perm = perm;
  if (static_cast<int>(perm.size()) != m) throw Error(ErrorCode::Validation, "permutation size differs from m");
  for (int x = 0; x < m; ++x) {
    if (std::abs(L.rho[x] - L.rho[perm[x]]) > tol) {
      r.verdict = Verdict::NotRealized;
      r.evidence = "rho not invariant at point " + std::to_string(x);
      return r;
    }
  }
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      if (std::abs(L.v[x].dot(L.v[y]) - L.v[perm[x]].dot(L.v[perm[y]])) > tol) {
        r.verdict = Verdict::NotRealized;
        r.evidence = "Gram matrix of Pauli vectors changes at (" + std::to_string(x) + "," + std::to_string(y) + ")";
        return r;
      }
  std::vector<Vec3> to;
  for (int x = 0; x < m; ++x) to.push_back(L.v[perm[x]]);
  r.R = kabsch_rotation(L.v, to);
  for (int x = 0; x < m; ++x) r.residual = std::max(r.residual, (r.R * L.v[x] - to[x]).norm());
  if (r.residual <= tol) {
    r.verdict = Verdict::Realized;
    return r;
  }
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) {
        Mat3 A, B;
        A << L.v[a], L.v[b], L.v[c];
        B << to[a], to[b], to[c];
        const double da = A.determinant(), db = B.determinant();
        if (std::abs(da) > tol && std::abs(db) > tol && da * db < 0) {
          r.verdict = Verdict::NotRealized;
          r.evidence = "orientation of (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) +
                       ") flips";
          return r;
        }
      }
  r.verdict = Verdict::Inconclusive;
  r.evidence = "no proper rotation within tolerance and no invariant obstruction";
  return r;
}

bool is_odd(const std::vector<int>& perm) {
  int inv = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j) inv += perm[i] > perm[j] ? 1 : 0;
  return inv % 2 == 1;
}

ImpossibilityCertificate full_symmetry_impossibility_check(const LocalCorrelation& L, double tol) {
  if (L.m() != 4) throw Error(ErrorCode::Validation, "the certificate is for m = 4");
  ImpossibilityCertificate c;
  const auto g = geometry_diagnostics(L);
  bool cond = g.degenerate.empty() && g.simplex_error <= tol;
  for (int x = 0; x < 4; ++x) {
    cond = cond && std::abs(L.rho[x] - 0.5) <= tol;
    cond = cond && std::abs(g.lengths[x] - g.mean_length) <= tol;
  }
  c.tetrahedral_conditions = cond;
  std::vector<int> perm{0, 1, 2, 3};
  do {
    auto r = test_permutation(L, perm, tol);
    if (is_odd(perm)) {
      ++c.odd_tested;
      c.odd_not_realized += r.verdict == Verdict::NotRealized ? 1 : 0;
    } else {
      c.even_realized += r.verdict == Verdict::Realized ? 1 : 0;
    }
    c.reports.push_back(std::move(r));
  } while (std::next_permutation(perm.begin(), perm.end()));
  c.certificate = c.odd_tested > 0 && c.odd_not_realized == c.odd_tested;
  return c;
}

ImpossibilityCertificate full_symmetry_impossibility_check() {
  return full_symmetry_impossibility_check(regular_tetrahedron(), 1e-9);
}

}  // namespace dstlab
