#include "dstlab/sea.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dstlab {

namespace {

// int_a^b f dz with z = e^u, one Gauss-Kronrod pass per decade.
double log_integral(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  auto g = [&](double u) {
    const double z = std::exp(u);
    return f(z) * z;
  };
  double s = 0;
  const double la = std::log(a), lb = std::log(b), step = std::log(10.0);
  for (double u = la; u < lb; u += step) {
    const double hi = std::min(lb, u + step);
    s += gauss_kronrod<double, 61>::integrate(g, u, hi, 12, 1e-14);
  }
  return s;
}

}  // namespace

RegularizedAction regularized_action(const SeaActionInput& in, const std::vector<double>& eps, double rel_tol) {
  if (!in.L) throw Error(ErrorCode::Validation, "no Lagrangian profile");
  if (eps.size() < 2) throw Error(ErrorCode::Validation, "need at least two epsilons");
  std::vector<double> e = eps;
  std::sort(e.begin(), e.end(), std::greater<>());
  const double c = std::min(1.0, in.z_max);
  if (!(e.front() < c) || !(e.back() > 0)) throw Error(ErrorCode::Validation, "epsilons must lie in (0, min(1, z_max))");
  const double m3 = in.m3, m5 = in.m5;
  std::function<double(double)> R = in.remainder;
  if (!R) R = [&](double z) { return in.L(z) * z - m3 * m3 / (z * z) - 2.0 * m3 * m5 / z; };

  // Counter terms integrate exactly on (eps, c]: the eps-dependence cancels.
  double tail = 0;
  if (in.z_max > c) {
    auto Lz = [&](double z) { return in.L(z) * z; };
    if (std::isinf(in.z_max)) {
      boost::math::quadrature::exp_sinh<double> es;
      tail = es.integrate([&](double t) { return Lz(c + t); }, 0.0, std::numeric_limits<double>::infinity());
    } else {
      tail = log_integral(Lz, c, in.z_max);
    }
  }
  const double base = -m3 * m3 / c + 2.0 * m3 * m5 * std::log(c) + tail;

  RegularizedAction out;
  out.epsilons = e;
  double acc = log_integral(R, e.front(), c);
  out.values.push_back(base + acc);
  for (size_t k = 1; k < e.size(); ++k) {
    acc += log_integral(R, e[k], e[k - 1]);
    out.values.push_back(base + acc);
  }
  out.value = out.values.back();
  const double scale = std::max(1.0, std::abs(out.value));
  for (double v : out.values) out.max_rel_spread = std::max(out.max_rel_spread, std::abs(v - out.value) / scale);
  out.converged = out.max_rel_spread <= rel_tol;
  if (!out.converged) {
    for (size_t k = 2; k < out.values.size(); ++k) {
      const double d0 = std::abs(out.values[k - 1] - out.values[k - 2]);
      const double d1 = std::abs(out.values[k] - out.values[k - 1]);
      if (d1 > 0.8 * d0)
        throw Error(ErrorCode::NotRegularizable,
                    "remainder is not integrable at z = 0: successive epsilon decades change S by " + std::to_string(d0) +
                        " and " + std::to_string(d1));
    }
  }
  return out;
}

SeaActionInput power_law_profile(double m3, double m5, double Z) {
  SeaActionInput in;
  in.m3 = m3;
  in.m5 = m5;
  in.z_max = Z;
  in.L = [m3, m5, Z](double z) { return z > Z ? 0.0 : m3 * m3 / (z * z * z) + 2.0 * m3 * m5 / (z * z); };
  in.remainder = [m3, m5, Z](double z) { return z > Z ? -m3 * m3 / (z * z) - 2.0 * m3 * m5 / z : 0.0; };
  return in;
}

double power_law_action(double m3, double m5, double Z) { return -m3 * m3 / Z + 2.0 * m3 * m5 * std::log(Z); }

SeaActionInput gaussian_profile(double m3, double m5) {
  SeaActionInput in;
  in.m3 = m3;
  in.m5 = m5;
  in.L = [m3, m5](double z) { return (m3 * m3 / (z * z * z) + 2.0 * m3 * m5 / (z * z)) * std::exp(-z * z); };
  in.remainder = [m3, m5](double z) { return (m3 * m3 / (z * z) + 2.0 * m3 * m5 / z) * std::expm1(-z * z); };
  return in;
}

double gaussian_action(double m3, double m5) {
  return -std::sqrt(std::numbers::pi) * m3 * m3 - std::numbers::egamma * m3 * m5;
}

double extended_action(double S, double m3, double m5, const std::function<double(double, double)>& F,
                       const RegularizationFreedom& c, const SeaConfig& seas) {
  seas.validate();
  double s4 = 0, s5 = 0;
  for (int b = 0; b < seas.generations(); ++b) {
    const double m = seas.masses[b], r = seas.weights[b];
    s4 += r * std::pow(m, 4);
    s5 += r * std::pow(m, 5);
  }
  return S + (F ? F(m3, m5) : 0.0) + c.c3 * s4 + c.c4 * s5;
}

double mass_constraint(const SeaConfig& seas) {
  seas.validate();
  double s = 0;
  for (int b = 0; b < seas.generations(); ++b) s += seas.masses[b] * std::pow(seas.weights[b], 3);
  return s;
}

void StateStabilityFunctions::validate() const {
  if (qsq.size() < 2) throw Error(ErrorCode::Validation, "need at least two grid points");
  if (a.size() != qsq.size() || b.size() != qsq.size()) throw Error(ErrorCode::Validation, "a, b, q^2 lengths differ");
  for (size_t i = 0; i < qsq.size(); ++i) {
    if (!(qsq[i] > 0)) throw Error(ErrorCode::Validation, "q^2 must be positive");
    if (i > 0 && !(qsq[i] > qsq[i - 1])) throw Error(ErrorCode::Validation, "q^2 grid must be strictly increasing");
  }
}

StabilityVerdict state_stability_check(const StateStabilityFunctions& fns, const SeaConfig& seas, double tol) {
  fns.validate();
  seas.validate();
  StabilityVerdict v;
  const size_t n = fns.qsq.size();
  std::vector<double> ab(n);
  for (size_t i = 0; i < n; ++i) ab[i] = fns.a[i] + fns.b[i];
  v.min_a = *std::min_element(fns.a.begin(), fns.a.end());
  v.inf_ab = *std::min_element(ab.begin(), ab.end());
  for (size_t i = 0; i < n; ++i)
    if (fns.a[i] < -tol) v.violations.push_back({"a<0", static_cast<int>(i), fns.qsq[i], fns.a[i], 0.0});
  for (double m : seas.masses) {
    const double s = m * m;
    if (s < fns.qsq.front() || s > fns.qsq.back())
      throw Error(ErrorCode::GridCoverage, "mass shell q^2 = " + std::to_string(s) + " lies outside the grid");
    const size_t hi = std::max<size_t>(1, std::lower_bound(fns.qsq.begin(), fns.qsq.end(), s) - fns.qsq.begin());
    const size_t lo = hi - 1;
    const double t = (s - fns.qsq[lo]) / (fns.qsq[hi] - fns.qsq[lo]);
    const double val = (1 - t) * ab[lo] + t * ab[hi];
    v.shell_ab.push_back(val);
    if (val > v.inf_ab + tol)
      for (size_t i = 0; i < n; ++i)
        if (ab[i] < val - tol) v.violations.push_back({"shell", static_cast<int>(i), fns.qsq[i], ab[i], m});
  }
  v.stable = v.violations.empty();
  return v;
}

}  // namespace dstlab
