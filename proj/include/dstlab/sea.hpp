#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dstlab/minkowski.hpp"

namespace dstlab {

struct RegularizationFreedom {
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0;
};

// Lagrangian profile on z = xi^2 > 0 with leading behaviour L z ~ m3^2/z^2 + 2 m3 m5/z.
struct SeaActionInput {
  double m3 = 0;
  double m5 = 0;
  std::function<double(double)> L;  // L(z)
  // Optional R(z) = L(z) z - m3^2/z^2 - 2 m3 m5/z in a cancellation-free form.
  std::function<double(double)> remainder;
  double z_max = std::numeric_limits<double>::infinity();  // L vanishes beyond
};

struct RegularizedAction {
  double value = 0;               // at the smallest epsilon
  std::vector<double> epsilons;
  std::vector<double> values;     // S(eps) per epsilon
  double max_rel_spread = 0;      // max |S(eps) - value| / max(1, |value|)
  bool converged = false;         // spread within rel_tol
};

// S = lim_{eps -> 0} ( int_eps^inf L z dz - m3^2/eps + 2 m3 m5 log eps ).
// Throws NotRegularizable if the epsilon differences do not shrink.
RegularizedAction regularized_action(const SeaActionInput& in,
                                     const std::vector<double>& eps = {1e-7, 1e-8, 1e-9, 1e-10},
                                     double rel_tol = 1e-6);

// Shipped test profiles.
// L = m3^2/z^3 + 2 m3 m5/z^2 on (0, Z]; S = -m3^2/Z + 2 m3 m5 ln Z.
SeaActionInput power_law_profile(double m3, double m5, double Z);
double power_law_action(double m3, double m5, double Z);
// L z = (m3^2/z^2 + 2 m3 m5/z) exp(-z^2); S = -sqrt(pi) m3^2 - gamma m3 m5.
SeaActionInput gaussian_profile(double m3, double m5);
double gaussian_action(double m3, double m5);

// S + F(m3, m5) + c3 sum rho m^4 + c4 sum rho m^5
double extended_action(double S, double m3, double m5, const std::function<double(double, double)>& F,
                       const RegularizationFreedom& c, const SeaConfig& seas);

// sum m rho^3
double mass_constraint(const SeaConfig& seas);

// Samples of Q-hat(k) = a k-slash/|k| + b on the lower cone, by q^2.
struct StateStabilityFunctions {
  std::vector<double> qsq;
  std::vector<double> a;
  std::vector<double> b;
  void validate() const;
};

struct StabilityViolation {
  std::string condition;  // "a<0" or "shell"
  int cell = -1;          // grid index
  double qsq = 0;
  double value = 0;
  double mass = 0;        // shell violations only
};

struct StabilityVerdict {
  bool stable = false;
  double min_a = 0;
  double inf_ab = 0;
  std::vector<double> shell_ab;  // (a+b)(m^2) per sea, interpolated
  std::vector<StabilityViolation> violations;
};

// Throws GridCoverage if some m^2 lies outside the grid.
StabilityVerdict state_stability_check(const StateStabilityFunctions& fns, const SeaConfig& seas, double tol = 1e-9);

}  // namespace dstlab
