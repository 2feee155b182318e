#include "dstlab/minkowski.hpp"

#include <algorithm>
#include <cmath>

namespace dstlab {

const std::array<Mat4c, 4>& dirac_gamma() {
  static const std::array<Mat4c, 4> g = [] {
    const cplx I(0, 1);
    std::array<Eigen::Matrix2cd, 3> s;
    s[0] << 0, 1, 1, 0;
    s[1] << 0, -I, I, 0;
    s[2] << 1, 0, 0, -1;
    std::array<Mat4c, 4> out;
    out[0].setZero();
    out[0].topLeftCorner<2, 2>().setIdentity();
    out[0].bottomRightCorner<2, 2>() = -Eigen::Matrix2cd::Identity();
    for (int k = 0; k < 3; ++k) {
      out[k + 1].setZero();
      out[k + 1].topRightCorner<2, 2>() = s[k];
      out[k + 1].bottomLeftCorner<2, 2>() = -s[k];
    }
    return out;
  }();
  return g;
}

Mat4c slash(const Vec4& xi) {
  const auto& g = dirac_gamma();
  // xi^j gamma_j = xi^0 gamma^0 - xi^k gamma^k
  return xi[0] * g[0] - xi[1] * g[1] - xi[2] * g[2] - xi[3] * g[3];
}

MinkowskiChain minkowski_chain(const VectorScalarKernel& k, const Tolerances& tol) {
  MinkowskiChain c;
  c.xi = k.xi;
  c.xi_sq = minkowski_square(k.xi);
  c.a = 2.0 * (k.alpha * std::conj(k.beta)).real();
  c.b = std::norm(k.alpha) * c.xi_sq + std::norm(k.beta);
  const cplx r = std::sqrt(cplx(c.a * c.a * c.xi_sq, 0.0));
  c.roots.resize(4);
  c.roots << c.b + r, c.b + r, c.b - r, c.b - r;
  c.causal = classify(c.roots, tol);
  return c;
}

MinkowskiGradient minkowski_gradient(const VectorScalarKernel& k, const Tolerances& tol) {
  const double xsq = minkowski_square(k.xi);
  const double scale = k.xi.squaredNorm();
  if (std::abs(xsq) <= tol.light_cone * std::max(1.0, scale))
    throw Error(ErrorCode::LightConeUndefined, "xi^2 = " + std::to_string(xsq) + " is on the light cone");
  MinkowskiGradient g;
  const Mat4c P = k.matrix();
  const Mat4c A = P * k.swapped().matrix();
  const Mat4c Ayx = k.swapped().matrix() * P;
  g.timelike = xsq > 0;
  if (g.timelike) {
    g.M = 2.0 * A - 0.5 * A.trace() * Mat4c::Identity();
    const double a = 2.0 * (k.alpha * std::conj(k.beta)).real();
    g.vector_form_error = (g.M - 2.0 * a * slash(k.xi)).cwiseAbs().maxCoeff();
    const Mat4c Myx = 2.0 * Ayx - 0.5 * Ayx.trace() * Mat4c::Identity();
    g.symmetry_error = (g.M - Myx).cwiseAbs().maxCoeff();
  }
  g.Q = 0.5 * g.M * P;
  return g;
}

const char* to_string(ConeRegion r) {
  switch (r) {
    case ConeRegion::UpperCone: return "UpperCone";
    case ConeRegion::LowerCone: return "LowerCone";
    case ConeRegion::Outside: return "Outside";
    case ConeRegion::Boundary: return "Boundary";
  }
  return "?";
}

ConeRegion mass_cone_classify(const Eigen::VectorXd& k, double tol) {
  if (k.size() < 2) throw Error(ErrorCode::Validation, "momentum needs at least one spatial component");
  const double ksq = minkowski_square(k);
  if (std::abs(ksq) <= tol) return ConeRegion::Boundary;
  if (ksq < 0) return ConeRegion::Outside;
  return k[0] > 0 ? ConeRegion::UpperCone : ConeRegion::LowerCone;
}

void SeaConfig::validate() const {
  if (masses.empty()) throw Error(ErrorCode::Validation, "no Dirac seas");
  if (masses.size() != weights.size()) throw Error(ErrorCode::Validation, "masses and weights differ in length");
  for (size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] > 0)) throw Error(ErrorCode::Validation, "masses must be positive");
    if (!(weights[i] > 0)) throw Error(ErrorCode::Validation, "weights must be positive");
    if (i > 0 && !(masses[i] > masses[i - 1]))
      throw Error(ErrorCode::Validation, "masses must be distinct and ascending");
  }
}

std::vector<ShellSupport> convolution_support(const Eigen::VectorXd& q, const SeaConfig& seas, double tol) {
  seas.validate();
  if (mass_cone_classify(q, tol) != ConeRegion::LowerCone)
    throw Error(ErrorCode::Unbounded, "q is not in the open lower mass cone, the convolution region is unbounded");
  const double Q = std::sqrt(minkowski_square(q));
  const double eta = std::acosh(std::max(1.0, -q[0] / Q));
  std::vector<ShellSupport> out;
  for (double m : seas.masses) {
    ShellSupport s;
    s.mass = m;
    // (q - p)^2 = Q^2 + m^2 - 2 Q m cosh(d) >= 0, d the rapidity distance
    s.half_width = std::acosh((Q * Q + m * m) / (2.0 * Q * m));
    s.center_rapidity = eta;
    const double lo = std::max(0.0, eta - s.half_width), hi = eta + s.half_width;
    s.energy_lo = -m * std::cosh(hi);
    s.energy_hi = -m * std::cosh(lo);
    s.spatial_lo = m * std::sinh(lo);
    s.spatial_hi = m * std::sinh(hi);
    if (q.size() == 2) {
      const double theta = std::atanh(q[1] / q[0]);
      s.rapidity_lo = theta - s.half_width;
      s.rapidity_hi = theta + s.half_width;
      s.p1_lo = -m * std::sinh(s.rapidity_hi);
      s.p1_hi = -m * std::sinh(s.rapidity_lo);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace dstlab
