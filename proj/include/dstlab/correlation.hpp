#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "dstlab/indefinite.hpp"

namespace dstlab {

using Mat2c = Eigen::Matrix2cd;

// F_x = (1/2)(rho_x Id + v_x . sigma), two particles, spin dimension 1.
struct LocalCorrelation {
  std::vector<double> rho;
  std::vector<Vec3> v;
  int m() const { return static_cast<int>(rho.size()); }
};

const std::array<Mat2c, 3>& pauli();

Mat2c correlation_matrix(const FermionicProjector& P, int x);
Mat2c correlation_matrix(double rho, const Vec3& v);
LocalCorrelation local_correlations(const FermionicProjector& P);

// max violation of sum rho = 2, sum v = 0, and of |v_x| >= rho_x
double sum_rule_defect(const LocalCorrelation& L);
double signature_defect(const LocalCorrelation& L);

// |rho_x v_y + rho_y v_x|^2 - |v_x x v_y|^2
double lambda_discriminant(double rx, const Vec3& vx, double ry, const Vec3& vy);
std::pair<cplx, cplx> lambda_pm(double rx, const Vec3& vx, double ry, const Vec3& vy);

// Inverse map for n = 1, f = 2: needs sum rho = 2, sum v = 0, |v_x| >= rho_x >= 0 ... up to sign.
FermionicProjector projector_from_correlations(const LocalCorrelation& L);

// m = 3: rho = 2/3, equilateral v of length v in the xy-plane, v >= 2/3.
LocalCorrelation triangle_family(double v);
FermionicProjector triangle_projector(double v);

LocalCorrelation regular_tetrahedron(double length = 0.5, double rho = 0.5);

struct GeometryReport {
  std::vector<double> lengths;
  double mean_length = 0;
  double length_spread = 0;          // (max - min) / mean
  double max_rel_dev_2_over_m = 0;   // max | |v| - 2/m | / (2/m)
  RMatrix cosines;                   // normalized dot products, NaN at degenerate points
  double simplex_error = 0;          // max |cos + 1/(m-1)|, only m <= 4
  double min_angle = 0;              // radians
  std::vector<int> degenerate;
};

GeometryReport geometry_diagnostics(const LocalCorrelation& L);

enum class Verdict { Realized, NotRealized, Inconclusive };
const char* to_string(Verdict v);

struct SymmetryReport {
  std::vector<int> perm;
  Verdict verdict = Verdict::Inconclusive;
  Mat3 R = Mat3::Identity();
  double residual = 0;
  std::string evidence;
};

// Proper rotation R minimizing sum |R a_i - b_i|^2.
Mat3 kabsch_rotation(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

SymmetryReport test_permutation(const LocalCorrelation& L, const std::vector<int>& perm, double tol = 1e-9);

struct ImpossibilityCertificate {
  bool tetrahedral_conditions = false;  // rho = 1/2, equal lengths, cos = -1/3
  bool certificate = false;             // every odd permutation NotRealized
  int odd_tested = 0;
  int odd_not_realized = 0;
  int even_realized = 0;
  std::vector<SymmetryReport> reports;
};

bool is_odd(const std::vector<int>& perm);

ImpossibilityCertificate full_symmetry_impossibility_check(const LocalCorrelation& L, double tol = 1e-9);
// The symmetric constraints force a regular tetrahedron; certify on that.
ImpossibilityCertificate full_symmetry_impossibility_check();

}  // namespace dstlab
