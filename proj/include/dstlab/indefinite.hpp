#pragma once

#include <cstdint>
#include <vector>

#include "dstlab/types.hpp"

namespace dstlab {

class Rng;

// H = C^{2nm}, per point n entries +1 then n entries -1.
struct DiscreteSpacetime {
  int n = 1;
  int m = 1;

  DiscreteSpacetime() = default;
  DiscreteSpacetime(int n_, int m_);

  int dim() const { return 2 * n * m; }
  int block() const { return 2 * n; }
  int offset(int x) const { return 2 * n * x; }
  double sign(int i) const { return (i % (2 * n)) < n ? 1.0 : -1.0; }
  RVector signature() const;
  void check_point(int x) const;
};

// Multiply rows (left) or columns (right) by the signature.
template <typename Real>
CMatrixT<Real> sig_left(const DiscreteSpacetime& s, const CMatrixT<Real>& X);
template <typename Real>
CMatrixT<Real> sig_right(const DiscreteSpacetime& s, const CMatrixT<Real>& X);

// Gram matrix <u_i|u_j> = u_i^dag S u_j.
template <typename Real>
CMatrixT<Real> indefinite_gram(const DiscreteSpacetime& s, const CMatrixT<Real>& basis);

// Loewdin step bringing the Gram matrix back to -I.
template <typename Real>
CMatrixT<Real> reorthonormalize(const DiscreteSpacetime& s, const CMatrixT<Real>& basis);

// Stores the image basis u_1..u_f (columns), <u_i|u_j> = -delta_ij.
template <typename Real>
class FermionicProjectorT {
 public:
  FermionicProjectorT(DiscreteSpacetime space, CMatrixT<Real> basis, Real tol = Real(1e-9));

  static FermionicProjectorT zero(const DiscreteSpacetime& space);

  const DiscreteSpacetime& space() const { return space_; }
  const CMatrixT<Real>& basis() const { return basis_; }
  int f() const { return static_cast<int>(basis_.cols()); }

  // P = -U U^dag S
  CMatrixT<Real> matrix() const;
  // rows of the basis on point x
  CMatrixT<Real> local(int x) const;

  // max |P^2 - P|, max |S P^dag S - P|, max |Gram + I|
  Real idempotency_defect() const;
  Real adjointness_defect() const;
  Real gram_defect() const;

 private:
  DiscreteSpacetime space_;
  CMatrixT<Real> basis_;
};

using FermionicProjector = FermionicProjectorT<double>;

template <typename Real>
struct ClosedChainT {
  int x = 0;
  int y = 0;
  CMatrixT<Real> matrix;
  CVectorT<Real> roots;
};
using ClosedChain = ClosedChainT<double>;

// E_x P E_y in block coordinates.
template <typename Real>
CMatrixT<Real> discrete_kernel(const FermionicProjectorT<Real>& P, int x, int y);

template <typename Real>
CVectorT<Real> chain_roots(const CMatrixT<Real>& A);

template <typename Real>
ClosedChainT<Real> closed_chain(const FermionicProjectorT<Real>& P, int x, int y);

// |A| = sum |lambda|, |A^2| = sum |lambda|^2
template <typename Real>
Real spectral_weight(const CVectorT<Real>& roots) {
  return roots.cwiseAbs().sum();
}
template <typename Real>
Real spectral_weight_sq(const CVectorT<Real>& roots) {
  return roots.cwiseAbs2().sum();
}

template <typename Real>
Real lagrangian(const CVectorT<Real>& roots, Real mu) {
  const Real w = spectral_weight(roots);
  return spectral_weight_sq(roots) - mu * w * w;
}

// (1/4n) sum_{i,j} (|l_i| - |l_j|)^2 with 2n = number of roots
template <typename Real>
Real lagrangian_pairwise(const CVectorT<Real>& roots) {
  const auto a = roots.cwiseAbs().eval();
  Real s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < a.size(); ++j) s += (a[i] - a[j]) * (a[i] - a[j]);
  return s / (Real(2) * Real(a.size()));
}

// Sums over all ordered pairs (x, y).
struct ActionParts {
  double weight_sq = 0;  // sum |A_xy^2|
  double weight2 = 0;    // sum |A_xy|^2, the constrained quantity
  double action(double mu) const { return weight_sq - mu * weight2; }
};

template <typename Real>
ActionParts action_parts(const FermionicProjectorT<Real>& P);

template <typename Real>
Real action(const FermionicProjectorT<Real>& P, Real mu);

template <typename Real>
Real constraint_value(const FermionicProjectorT<Real>& P);

template <typename Real>
struct GradientT {
  CMatrixT<Real> M;
  bool fallback = false;   // finite differences were used
  bool collision = false;  // two moduli within the collision tolerance
  Real condition = 1;      // of the eigenvector matrix
};
using Gradient = GradientT<double>;

// dL = Re Tr(M dA). Roots below tol.degenerate_root get the symmetric derivative of |lambda|, i.e. none.
// Finite differences only when the eigenvector matrix is ill-conditioned.
template <typename Real>
GradientT<Real> lagrangian_gradient(const CMatrixT<Real>& A, Real mu, const Tolerances& tol = {});

template <typename Real>
CMatrixT<Real> lagrangian_gradient_fd(const CMatrixT<Real>& A, Real mu, Real h);

template <typename Real>
struct QKernelT {
  Real mu = 0;
  CMatrixT<Real> Q;  // full dim x dim operator, blocks Q(x,y)
  int fallbacks = 0;
  CMatrixT<Real> block(const DiscreteSpacetime& s, int x, int y) const {
    return Q.block(s.offset(x), s.offset(y), s.block(), s.block());
  }
};
using QKernel = QKernelT<double>;

template <typename Real>
QKernelT<Real> q_kernel(const FermionicProjectorT<Real>& P, Real mu, const Tolerances& tol = {});

// Size of a kernel C seen through the occupied states: sqrt(sum_xy |psi_x^* S_x C_xy psi_y|^2).
// Unchanged by per-point U(n,n) gauges, unlike the plain Frobenius norm.
// Vanishes iff C = 0 when every psi_x has full rank 2n (needs f >= 2n); for f < 2n it is a seminorm.
template <typename Real>
Real commutator_norm(const FermionicProjectorT<Real>& P, const CMatrixT<Real>& C);

// commutator_norm of [P, Q_mu].
template <typename Real>
Real el_residual(const FermionicProjectorT<Real>& P, Real mu, const Tolerances& tol = {});

// 4i Tr([P,Q] B), real for self-adjoint Q and B.
template <typename Real>
Real first_variation(const CMatrixT<Real>& P, const CMatrixT<Real>& Q, const CMatrixT<Real>& B);

// exp(iB) applied to the projector: P -> U P U^-1.
template <typename Real>
FermionicProjectorT<Real> conjugate_by_exp(const FermionicProjectorT<Real>& P, const CMatrixT<Real>& B,
                                           Real eta);

struct GaugeTransform {
  std::vector<CMatrix> blocks;
};

FermionicProjector gauge_transform(const FermionicProjector& P, const GaugeTransform& U, double tol = 1e-9);

// Self-adjoint w.r.t. the indefinite product: B = S H, H Gaussian Hermitian.
CMatrix random_self_adjoint(const DiscreteSpacetime& s, Rng& rng, double scale);

GaugeTransform random_gauge(const DiscreteSpacetime& s, std::uint64_t seed, double scale = 0.5);

FermionicProjector random_projector(const DiscreteSpacetime& s, int f, std::uint64_t seed, double scale = -1);

}  // namespace dstlab
