#pragma once

#include <array>
#include <vector>

#include "dstlab/causal.hpp"
#include "dstlab/types.hpp"

namespace dstlab {

using Vec4 = Eigen::Vector4d;
using Mat4c = Eigen::Matrix<cplx, 4, 4>;

// Metric (+,-,-,-).
template <typename Derived>
typename Derived::Scalar minkowski_dot(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
  typename Derived::Scalar s = a[0] * b[0];
  for (Eigen::Index i = 1; i < a.size(); ++i) s -= a[i] * b[i];
  return s;
}

template <typename Derived>
typename Derived::Scalar minkowski_square(const Eigen::MatrixBase<Derived>& a) {
  return minkowski_dot(a, a);
}

// Dirac representation, gamma^0 = diag(1,1,-1,-1).
const std::array<Mat4c, 4>& dirac_gamma();

// xi^j gamma_j
Mat4c slash(const Vec4& xi);

// P(x,y) = alpha xi_j gamma^j + beta with xi = y - x.
struct VectorScalarKernel {
  cplx alpha{0, 0};
  cplx beta{0, 0};
  Vec4 xi = Vec4::Zero();

  Mat4c matrix() const { return alpha * slash(xi) + beta * Mat4c::Identity(); }
  // P(y,x)
  VectorScalarKernel swapped() const { return {std::conj(alpha), std::conj(beta), xi}; }
};

struct MinkowskiChain {
  double a = 0;  // 2 Re(alpha conj beta)
  double b = 0;  // |alpha|^2 xi^2 + |beta|^2
  Vec4 xi = Vec4::Zero();
  double xi_sq = 0;
  CVector roots;  // b + r, b + r, b - r, b - r with r = sqrt(a^2 xi^2)
  CausalClass causal;
  Mat4c matrix() const { return a * slash(xi) + b * Mat4c::Identity(); }
};

MinkowskiChain minkowski_chain(const VectorScalarKernel& k, const Tolerances& tol = {});

struct MinkowskiGradient {
  Mat4c M = Mat4c::Zero();
  Mat4c Q = Mat4c::Zero();  // M P(x,y) / 2
  bool timelike = false;
  double vector_form_error = 0;  // |(2A - Tr(A)/2) - 2 a slash(xi)|
  double symmetry_error = 0;     // |M[A_xy] - M[A_yx]|
};

// Throws LightConeUndefined for |xi^2| <= tol.light_cone.
MinkowskiGradient minkowski_gradient(const VectorScalarKernel& k, const Tolerances& tol = {});

enum class ConeRegion { UpperCone, LowerCone, Outside, Boundary };
const char* to_string(ConeRegion r);

// Works for any 1+d vector.
ConeRegion mass_cone_classify(const Eigen::VectorXd& k, double tol = 1e-12);

// Masses ascending and distinct, weights positive.
struct SeaConfig {
  std::vector<double> masses;
  std::vector<double> weights;
  void validate() const;
  int generations() const { return static_cast<int>(masses.size()); }
};

// {p on the lower shell p^2 = m^2 : (q - p)^2 >= 0} for q in the open lower cone.
// It is a hyperbolic ball of radius half_width about q/|q|.
struct ShellSupport {
  double mass = 0;
  double half_width = 0;      // rapidity
  double center_rapidity = 0; // rapidity of q relative to the rest frame
  double energy_lo = 0, energy_hi = 0;  // range of p^0 (negative)
  double spatial_lo = 0, spatial_hi = 0;  // range of |p|
  // 1+1 only, shell p = -m (cosh s, sinh s): intervals in s and in p^1
  double rapidity_lo = 0, rapidity_hi = 0;
  double p1_lo = 0, p1_hi = 0;
};

// Throws Unbounded unless q lies in the open lower cone.
std::vector<ShellSupport> convolution_support(const Eigen::VectorXd& q, const SeaConfig& seas, double tol = 1e-12);

}  // namespace dstlab
