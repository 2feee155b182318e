#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dstlab {

template <typename Real>
using CplxT = std::complex<Real>;
template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using RMatrixT = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

using cplx = CplxT<double>;
using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RVector = RVectorT<double>;
using RMatrix = RMatrixT<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class ErrorCode {
  Validation,
  IndexOutOfRange,
  EigenFailure,
  NotUnitary,
  Infeasible,
  InfeasibleKappa,
  Divergence,
  MaxIterations,
  LightConeUndefined,
  UnimplementedProduct,
  Unbounded,
  NotRegularizable,
  GridCoverage,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// All numerical thresholds in one place.
struct Tolerances {
  double projector = 1e-9;        // P^2 = P, Gram = -I
  double reorthonormalize = 1e-10;
  double degenerate_root = 1e-10; // |lambda| < this * (1 + ||A||)
  double modulus_collision = 1e-8;
  double eigvec_condition = 1e8;
  double fd_step = 1e-6;
  double causal_rel = 1e-9;       // tau_im = tau_mod = causal_rel * (1 + max|lambda|)
  double light_cone = 1e-9;
};

}  // namespace dstlab
