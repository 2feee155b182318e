#include "dstlab/indefinite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "dstlab/rng.hpp"

namespace dstlab {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InfeasibleKappa: return "InfeasibleKappa";
    case ErrorCode::Divergence: return "DivergenceDetected";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::LightConeUndefined: return "LightConeUndefined";
    case ErrorCode::UnimplementedProduct: return "UnimplementedProduct";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::NotRegularizable: return "NotRegularizable";
    case ErrorCode::GridCoverage: return "GridCoverage";
  }
  return "Unknown";
}

DiscreteSpacetime::DiscreteSpacetime(int n_, int m_) : n(n_), m(m_) {
  if (n < 1 || m < 1) throw Error(ErrorCode::Validation, "n and m must be positive");
}

RVector DiscreteSpacetime::signature() const {
  RVector s(dim());
  for (int i = 0; i < dim(); ++i) s[i] = sign(i);
  return s;
}

void DiscreteSpacetime::check_point(int x) const {
  if (x < 0 || x >= m) throw Error(ErrorCode::IndexOutOfRange, "point " + std::to_string(x));
}

template <typename Real>
CMatrixT<Real> sig_left(const DiscreteSpacetime& s, const CMatrixT<Real>& X) {
  CMatrixT<Real> Y = X;
  for (int i = 0; i < s.dim(); ++i)
    if (s.sign(i) < 0) Y.row(i) *= Real(-1);
  return Y;
}

template <typename Real>
CMatrixT<Real> sig_right(const DiscreteSpacetime& s, const CMatrixT<Real>& X) {
  CMatrixT<Real> Y = X;
  for (int i = 0; i < s.dim(); ++i)
    if (s.sign(i) < 0) Y.col(i) *= Real(-1);
  return Y;
}

template <typename Real>
CMatrixT<Real> indefinite_gram(const DiscreteSpacetime& s, const CMatrixT<Real>& basis) {
  return basis.adjoint() * sig_left(s, basis);
}

template <typename Real>
CMatrixT<Real> reorthonormalize(const DiscreteSpacetime& s, const CMatrixT<Real>& basis) {
  if (basis.cols() == 0) return basis;
  const CMatrixT<Real> G = -indefinite_gram(s, basis);
  Eigen::SelfAdjointEigenSolver<CMatrixT<Real>> es(G);
  if (es.eigenvalues().minCoeff() <= Real(0))
    throw Error(ErrorCode::Validation, "basis spans a subspace that is not negative definite");
  const auto d = es.eigenvalues().cwiseSqrt().cwiseInverse().template cast<CplxT<Real>>();
  const CMatrixT<Real> isqrt = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
  return basis * isqrt;
}

template <typename Real>
FermionicProjectorT<Real>::FermionicProjectorT(DiscreteSpacetime space, CMatrixT<Real> basis, Real tol)
    : space_(space), basis_(std::move(basis)) {
  if (basis_.rows() != space_.dim())
    throw Error(ErrorCode::Validation, "basis rows must equal 2nm");
  if (basis_.cols() > space_.n * space_.m)
    throw Error(ErrorCode::Validation, "f exceeds nm, no negative-definite subspace of that rank");
  if (gram_defect() > tol * (Real(1) + basis_.squaredNorm()))
    throw Error(ErrorCode::Validation, "basis is not indefinite-orthonormal (Gram != -I)");
}

template <typename Real>
FermionicProjectorT<Real> FermionicProjectorT<Real>::zero(const DiscreteSpacetime& space) {
  return FermionicProjectorT(space, CMatrixT<Real>(space.dim(), 0));
}

template <typename Real>
CMatrixT<Real> FermionicProjectorT<Real>::matrix() const {
  return -sig_right(space_, CMatrixT<Real>(basis_ * basis_.adjoint()));
}

template <typename Real>
CMatrixT<Real> FermionicProjectorT<Real>::local(int x) const {
  space_.check_point(x);
  return basis_.middleRows(space_.offset(x), space_.block());
}

template <typename Real>
Real FermionicProjectorT<Real>::idempotency_defect() const {
  const CMatrixT<Real> P = matrix();
  return (P * P - P).cwiseAbs().maxCoeff();
}

template <typename Real>
Real FermionicProjectorT<Real>::adjointness_defect() const {
  const CMatrixT<Real> P = matrix();
  const CMatrixT<Real> Pa = sig_left(space_, sig_right(space_, CMatrixT<Real>(P.adjoint())));
  return (Pa - P).cwiseAbs().maxCoeff();
}

template <typename Real>
Real FermionicProjectorT<Real>::gram_defect() const {
  if (basis_.cols() == 0) return 0;
  const CMatrixT<Real> G = indefinite_gram(space_, basis_);
  return (G + CMatrixT<Real>::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

template <typename Real>
CMatrixT<Real> discrete_kernel(const FermionicProjectorT<Real>& P, int x, int y) {
  const auto& s = P.space();
  s.check_point(x);
  s.check_point(y);
  const int b = s.block();
  if (P.f() == 0) return CMatrixT<Real>::Zero(b, b);
  CMatrixT<Real> K = -P.local(x) * P.local(y).adjoint();
  K.rightCols(s.n) *= Real(-1);  // the local signature on the right
  return K;
}

template <typename Real>
CVectorT<Real> chain_roots(const CMatrixT<Real>& A) {
  Eigen::ComplexEigenSolver<CMatrixT<Real>> es(A, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "closed chain eigen-solver did not converge");
  return es.eigenvalues();
}

template <typename Real>
ClosedChainT<Real> closed_chain(const FermionicProjectorT<Real>& P, int x, int y) {
  ClosedChainT<Real> c;
  c.x = x;
  c.y = y;
  c.matrix = discrete_kernel(P, x, y) * discrete_kernel(P, y, x);
  c.roots = chain_roots(c.matrix);
  return c;
}

template <typename Real>
ActionParts action_parts(const FermionicProjectorT<Real>& P) {
  const auto& s = P.space();
  ActionParts out;
  if (P.f() == 0) return out;
  const CMatrixT<Real> K = P.matrix();
  const int b = s.block();
  for (int x = 0; x < s.m; ++x) {
    for (int y = x; y < s.m; ++y) {
      const CMatrixT<Real> A = K.block(s.offset(x), s.offset(y), b, b) * K.block(s.offset(y), s.offset(x), b, b);
      const CVectorT<Real> r = chain_roots(A);
      const double mult = (x == y) ? 1.0 : 2.0;  // A_yx is isospectral to A_xy
      const double w = static_cast<double>(spectral_weight(r));
      out.weight_sq += mult * static_cast<double>(spectral_weight_sq(r));
      out.weight2 += mult * w * w;
    }
  }
  return out;
}

template <typename Real>
Real action(const FermionicProjectorT<Real>& P, Real mu) {
  return static_cast<Real>(action_parts(P).action(static_cast<double>(mu)));
}

template <typename Real>
Real constraint_value(const FermionicProjectorT<Real>& P) {
  return static_cast<Real>(action_parts(P).weight2);
}

template <typename Real>
CMatrixT<Real> lagrangian_gradient_fd(const CMatrixT<Real>& A, Real mu, Real h) {
  const Eigen::Index d = A.rows();
  auto L = [&](const CMatrixT<Real>& X) { return lagrangian(chain_roots(X), mu); };
  auto dL = [&](const CMatrixT<Real>& E) { return (L(A + h * E) - L(A - h * E)) / (Real(2) * h); };
  CMatrixT<Real> M(d, d);
  const CplxT<Real> I(0, 1);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      CMatrixT<Real> E = CMatrixT<Real>::Zero(d, d);
      E(b, a) = 1;
      M(a, b) = CplxT<Real>(dL(E), 0) - I * dL(CMatrixT<Real>(I * E));
    }
  }
  return M;
}

template <typename Real>
GradientT<Real> lagrangian_gradient(const CMatrixT<Real>& A, Real mu, const Tolerances& tol) {
  GradientT<Real> g;
  const Real normA = A.norm();
  const Real h = Real(tol.fd_step) * (Real(1) + normA);
  Eigen::ComplexEigenSolver<CMatrixT<Real>> es(A, true);
  if (es.info() != Eigen::Success) {
    g.fallback = true;
    g.M = lagrangian_gradient_fd(A, mu, h);
    return g;
  }
  const CVectorT<Real> lam = es.eigenvalues();
  const CMatrixT<Real> V = es.eigenvectors();
  const auto mod = lam.cwiseAbs().eval();
  const Real maxmod = mod.size() ? mod.maxCoeff() : Real(0);
  for (Eigen::Index i = 0; i < mod.size(); ++i)
    for (Eigen::Index j = i + 1; j < mod.size(); ++j)
      if (std::abs(mod[i] - mod[j]) < Real(tol.modulus_collision) * (Real(1) + maxmod)) g.collision = true;

  Eigen::JacobiSVD<CMatrixT<Real>> svd(V);
  const auto sv = svd.singularValues();
  g.condition = sv[sv.size() - 1] > Real(0) ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<Real>::infinity();
  if (!(g.condition < Real(tol.eigvec_condition))) {
    g.fallback = true;
    g.M = lagrangian_gradient_fd(A, mu, h);
    return g;
  }
  const Real total = mod.sum();
  const Real zero = Real(tol.degenerate_root) * (Real(1) + normA);
  CVectorT<Real> d(lam.size());
  for (Eigen::Index j = 0; j < lam.size(); ++j) {
    // |lambda| has a kink at 0; take its symmetric derivative, which vanishes
    if (mod[j] < zero) d[j] = Real(2) * std::conj(lam[j]);
    else d[j] = (Real(2) * mod[j] - Real(2) * mu * total) * std::conj(lam[j]) / mod[j];
  }
  g.M = V * d.asDiagonal() * V.partialPivLu().inverse();
  return g;
}

template <typename Real>
QKernelT<Real> q_kernel(const FermionicProjectorT<Real>& P, Real mu, const Tolerances& tol) {
  const auto& s = P.space();
  const int b = s.block();
  QKernelT<Real> q;
  q.mu = mu;
  q.Q = CMatrixT<Real>::Zero(s.dim(), s.dim());
  if (P.f() == 0) return q;
  const CMatrixT<Real> K = P.matrix();
  std::vector<CMatrixT<Real>> M(static_cast<size_t>(s.m * s.m));
  for (int x = 0; x < s.m; ++x) {
    for (int y = 0; y < s.m; ++y) {
      const CMatrixT<Real> A = K.block(s.offset(x), s.offset(y), b, b) * K.block(s.offset(y), s.offset(x), b, b);
      auto g = lagrangian_gradient(A, mu, tol);
      q.fallbacks += g.fallback ? 1 : 0;
      M[static_cast<size_t>(x * s.m + y)] = std::move(g.M);
    }
  }
  for (int x = 0; x < s.m; ++x) {
    for (int y = 0; y < s.m; ++y) {
      const auto Pxy = K.block(s.offset(x), s.offset(y), b, b);
      q.Q.block(s.offset(x), s.offset(y), b, b) =
          Real(0.25) * (M[static_cast<size_t>(x * s.m + y)] * Pxy + Pxy * M[static_cast<size_t>(y * s.m + x)]);
    }
  }
  return q;
}

template <typename Real>
Real commutator_norm(const FermionicProjectorT<Real>& P, const CMatrixT<Real>& C) {
  const auto& s = P.space();
  const int b = s.block();
  const RVectorT<Real> sig = s.signature().template cast<Real>();
  const CMatrixT<Real>& psi = P.basis();
  // W_xy = psi_x^* S_x C_xy psi_y; a block gauge G_x drops out because G_x^* S_x G_x = S_x
  std::vector<CMatrixT<Real>> left(static_cast<size_t>(s.m));
  for (int x = 0; x < s.m; ++x)
    left[static_cast<size_t>(x)] =
        psi.middleRows(s.offset(x), b).adjoint() * sig.segment(s.offset(x), b).asDiagonal();
  Real sum = 0;
  for (int x = 0; x < s.m; ++x)
    for (int y = 0; y < s.m; ++y)
      sum += (left[static_cast<size_t>(x)] * C.block(s.offset(x), s.offset(y), b, b) * psi.middleRows(s.offset(y), b))
                 .squaredNorm();
  return std::sqrt(sum);
}

template <typename Real>
Real el_residual(const FermionicProjectorT<Real>& P, Real mu, const Tolerances& tol) {
  const CMatrixT<Real> K = P.matrix();
  const CMatrixT<Real> Q = q_kernel(P, mu, tol).Q;
  return commutator_norm(P, CMatrixT<Real>(K * Q - Q * K));
}

template <typename Real>
Real first_variation(const CMatrixT<Real>& P, const CMatrixT<Real>& Q, const CMatrixT<Real>& B) {
  const CMatrixT<Real> C = P * Q - Q * P;
  return (CplxT<Real>(0, 4) * (C * B).trace()).real();
}

template <typename Real>
FermionicProjectorT<Real> conjugate_by_exp(const FermionicProjectorT<Real>& P, const CMatrixT<Real>& B,
                                           Real eta) {
  const CMatrixT<Real> G = CplxT<Real>(0, eta) * B;
  const CMatrixT<Real> U = G.exp();
  CMatrixT<Real> basis = U * P.basis();
  const auto& s = P.space();
  const CMatrixT<Real> gram = indefinite_gram(s, basis);
  const Real drift = (gram + CMatrixT<Real>::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (drift > Real(1e-10)) basis = reorthonormalize(s, basis);
  return FermionicProjectorT<Real>(s, std::move(basis));
}

FermionicProjector gauge_transform(const FermionicProjector& P, const GaugeTransform& U, double tol) {
  const auto& s = P.space();
  if (static_cast<int>(U.blocks.size()) != s.m) throw Error(ErrorCode::Validation, "gauge transform needs one block per point");
  const int b = s.block();
  CMatrix sl = CMatrix::Identity(b, b);
  sl.bottomRightCorner(s.n, s.n) *= -1.0;
  CMatrix basis = P.basis();
  for (int x = 0; x < s.m; ++x) {
    const CMatrix& Ux = U.blocks[static_cast<size_t>(x)];
    if (Ux.rows() != b || Ux.cols() != b) throw Error(ErrorCode::Validation, "gauge block has wrong size");
    const double defect = (Ux.adjoint() * sl * Ux - sl).cwiseAbs().maxCoeff();
    if (defect > tol * (1.0 + Ux.squaredNorm()))
      throw Error(ErrorCode::NotUnitary, "gauge block " + std::to_string(x) + " is not unitary for the (n,n) product");
    basis.middleRows(s.offset(x), b) = Ux * basis.middleRows(s.offset(x), b);
  }
  return FermionicProjector(s, std::move(basis));
}

namespace {

CMatrix gaussian_hermitian(int d, Rng& rng, double scale) {
  CMatrix H(d, d);
  for (int i = 0; i < d; ++i) {
    H(i, i) = rng.normal() * scale;
    for (int j = i + 1; j < d; ++j) {
      const cplx z(rng.normal(), rng.normal());
      H(i, j) = z * (scale / std::sqrt(2.0));
      H(j, i) = std::conj(H(i, j));
    }
  }
  return H;
}

}  // namespace

CMatrix random_self_adjoint(const DiscreteSpacetime& s, Rng& rng, double scale) {
  return sig_left(s, gaussian_hermitian(s.dim(), rng, scale));
}

GaugeTransform random_gauge(const DiscreteSpacetime& s, std::uint64_t seed, double scale) {
  Rng rng(seed, 0x6761756765ULL);
  const int b = s.block();
  DiscreteSpacetime local(s.n, 1);
  GaugeTransform U;
  for (int x = 0; x < s.m; ++x) {
    const CMatrix B = sig_left(local, gaussian_hermitian(b, rng, scale));
    U.blocks.push_back(CMatrix(cplx(0, 1) * B).exp());
  }
  return U;
}

FermionicProjector random_projector(const DiscreteSpacetime& s, int f, std::uint64_t seed, double scale) {
  const int nm = s.n * s.m;
  if (f < 0 || f > nm) throw Error(ErrorCode::Validation, "need 0 <= f <= nm");
  if (f == 0) return FermionicProjector::zero(s);
  Rng rng(seed, 0x70726f6aULL);
  CMatrix W(nm, f);
  for (int j = 0; j < f; ++j)
    for (int i = 0; i < nm; ++i) W(i, j) = cplx(rng.normal(), rng.normal());
  const CMatrix Qw = Eigen::HouseholderQR<CMatrix>(W).householderQ() * CMatrix::Identity(nm, f);
  CMatrix basis = CMatrix::Zero(s.dim(), f);
  for (int x = 0, k = 0; x < s.m; ++x)
    for (int a = 0; a < s.n; ++a, ++k) basis.row(s.offset(x) + s.n + a) = Qw.row(k);
  if (scale < 0) scale = 1.0 / std::sqrt(static_cast<double>(s.dim()));
  const CMatrix B = random_self_adjoint(s, rng, scale);
  basis = CMatrix(CMatrix(cplx(0, 1) * B).exp()) * basis;
  return FermionicProjector(s, reorthonormalize(s, basis));
}

#define DSTLAB_INSTANTIATE(R)                                                                            \
  template CMatrixT<R> sig_left<R>(const DiscreteSpacetime&, const CMatrixT<R>&);                        \
  template CMatrixT<R> sig_right<R>(const DiscreteSpacetime&, const CMatrixT<R>&);                       \
  template CMatrixT<R> indefinite_gram<R>(const DiscreteSpacetime&, const CMatrixT<R>&);                 \
  template CMatrixT<R> reorthonormalize<R>(const DiscreteSpacetime&, const CMatrixT<R>&);                \
  template class FermionicProjectorT<R>;                                                                 \
  template CMatrixT<R> discrete_kernel<R>(const FermionicProjectorT<R>&, int, int);                      \
  template CVectorT<R> chain_roots<R>(const CMatrixT<R>&);                                               \
  template ClosedChainT<R> closed_chain<R>(const FermionicProjectorT<R>&, int, int);                     \
  template ActionParts action_parts<R>(const FermionicProjectorT<R>&);                                   \
  template R action<R>(const FermionicProjectorT<R>&, R);                                                \
  template R constraint_value<R>(const FermionicProjectorT<R>&);                                         \
  template CMatrixT<R> lagrangian_gradient_fd<R>(const CMatrixT<R>&, R, R);                              \
  template GradientT<R> lagrangian_gradient<R>(const CMatrixT<R>&, R, const Tolerances&);                \
  template QKernelT<R> q_kernel<R>(const FermionicProjectorT<R>&, R, const Tolerances&);                 \
  template R el_residual<R>(const FermionicProjectorT<R>&, R, const Tolerances&);                        \
  template R commutator_norm<R>(const FermionicProjectorT<R>&, const CMatrixT<R>&);                        \
  template R first_variation<R>(const CMatrixT<R>&, const CMatrixT<R>&, const CMatrixT<R>&);             \
  template FermionicProjectorT<R> conjugate_by_exp<R>(const FermionicProjectorT<R>&, const CMatrixT<R>&, R);

DSTLAB_INSTANTIATE(double)
DSTLAB_INSTANTIATE(long double)

}  // namespace dstlab
