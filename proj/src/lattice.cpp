#include "dstlab/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>

#include "dstlab/indefinite.hpp"

namespace dstlab {

const char* to_string(PhaseConvention c) { return c == PhaseConvention::Dft ? "dft" : "literal"; }

PhaseConvention phase_convention_from_string(const std::string& s) {
  if (s == "dft") return PhaseConvention::Dft;
  if (s == "literal") return PhaseConvention::Literal;
  throw Error(ErrorCode::Validation, "unknown phase convention '" + s + "'");
}

void LatticeGeometry::validate() const {
  if (Nt < 1 || Nr < 1) throw Error(ErrorCode::Validation, "lattice sizes must be positive");
}

double LatticeGeometry::t(int i) const { return 2.0 * std::numbers::pi * i; }
double LatticeGeometry::r(int j) const { return 2.0 * std::numbers::pi * j; }

double OccupiedState::v0() const { return phi * std::cosh(tau); }
double OccupiedState::vr() const { return phi * std::sinh(tau); }

double kernel_k0(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

cplx kernel_k1(double x) {
  if (std::abs(x) < 1e-4) return {0.0, x / 3.0 - x * x * x / 30.0};
  return {0.0, std::sin(x) / (x * x) - std::cos(x) / x};
}

const char* to_string(WeightPreset w) {
  switch (w) {
    case WeightPreset::Default: return "default";
    case WeightPreset::Uniform: return "uniform";
    case WeightPreset::LinearRadial: return "linear-radial";
  }
  return "?";
}

WeightPreset weight_preset_from_string(const std::string& s) {
  if (s == "default") return WeightPreset::Default;
  if (s == "uniform") return WeightPreset::Uniform;
  if (s == "linear-radial") return WeightPreset::LinearRadial;
  throw Error(ErrorCode::Validation, "unknown weight preset '" + s + "'");
}

LatticeWeights lattice_weights(const LatticeGeometry& g, WeightPreset preset) {
  g.validate();
  LatticeWeights w;
  for (int i = 0; i < g.Nt; ++i)
    w.rho_t.push_back(preset == WeightPreset::Uniform ? 1.0 : (i == 0 ? 1.0 : 2.0));
  for (int j = 0; j < g.Nr; ++j) {
    switch (preset) {
      case WeightPreset::Default: w.rho_r.push_back(j == 0 ? 1.0 / 12.0 : double(j) * j); break;
      case WeightPreset::Uniform: w.rho_r.push_back(1.0); break;
      case WeightPreset::LinearRadial: w.rho_r.push_back(j == 0 ? 0.25 : double(j)); break;
    }
  }
  return w;
}

Mat4c lattice_kernel(const LatticeGeometry& g, const LatticeOccupation& occ, int i, int j) {
  const auto& gam = dirac_gamma();
  const double t = g.t(i), r = g.r(j);
  const double tscale = g.convention == PhaseConvention::Dft ? 1.0 / g.Nt : 1.0;
  const double rscale = g.convention == PhaseConvention::Dft ? 1.0 / g.Nr : 1.0;
  Mat4c P = Mat4c::Zero();
  for (const auto& s : occ) {
    if (!g.contains_dual(s.omega, s.k))
      throw Error(ErrorCode::Validation, "occupied point (" + std::to_string(s.omega) + ", " + std::to_string(s.k) +
                                             ") is outside the dual lattice");
    const double x = s.k * r * rscale;
    const double k0 = kernel_k0(x);
    const cplx k1 = kernel_k1(x);
    const cplx phase = std::polar(1.0, -s.omega * t * tscale);
    P += phase * (s.v0() * k0 * gam[0] + s.vr() * k1 * gam[1] + s.phi * k0 * Mat4c::Identity());
  }
  return P;
}

LatticeAction lattice_action(const LatticeGeometry& g, const LatticeOccupation& occ, const LatticeWeights& w) {
  g.validate();
  if (static_cast<int>(w.rho_t.size()) != g.Nt || static_cast<int>(w.rho_r.size()) != g.Nr)
    throw Error(ErrorCode::Validation, "weights do not match the lattice");
  const Mat4c& g0 = dirac_gamma()[0];
  LatticeAction a;
  a.L = RMatrix::Zero(g.Nt, g.Nr);
  Eigen::ComplexEigenSolver<Mat4c> es;
  for (int i = 0; i < g.Nt; ++i)
    for (int j = 0; j < g.Nr; ++j) {
      const Mat4c P = lattice_kernel(g, occ, i, j);
      const Mat4c A = P * (g0 * P.adjoint() * g0);
      es.compute(A, false);
      if (es.info() != Eigen::Success) {
        ++a.eigen_failures;
        continue;
      }
      const CVector roots = es.eigenvalues();
      a.L(i, j) = lagrangian<double>(roots, 0.25);
      a.S += w.rho_t[i] * w.rho_r[j] * a.L(i, j);
    }
  return a;
}

double trace_condition(const LatticeOccupation& occ) {
  double s = 0;
  for (const auto& o : occ) s += o.phi;
  return s;
}

LatticeOccupation enforce_trace(LatticeOccupation occ, double target) {
  const double t = trace_condition(occ);
  if (t == 0) throw Error(ErrorCode::Validation, "cannot rescale an empty or zero occupation to a nonzero trace");
  for (auto& o : occ) o.phi *= target / t;
  return occ;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return v;
}

LandscapeSurface landscape_scan_2d(const LatticeGeometry& g, const LatticeOccupation& pair,
                                   const std::vector<double>& tau, const LatticeWeights& w, int threads) {
  if (pair.size() != 2) throw Error(ErrorCode::Validation, "the landscape needs exactly two occupied states");
  if (tau.empty()) throw Error(ErrorCode::Validation, "empty tau grid");
  const int n = static_cast<int>(tau.size());
  LandscapeSurface s;
  s.tau = tau;
  s.S = RMatrix::Zero(n, n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next++) < n;) {
      LatticeOccupation occ = pair;
      occ[0].tau = tau[i];
      for (int j = 0; j < n; ++j) {
        occ[1].tau = tau[j];
        s.S(i, j) = lattice_action(g, occ, w).S;
      }
    }
  };
  unsigned nt = threads > 0 ? unsigned(threads) : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, unsigned(n));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  auto point = [&](int i, int j) {
    return GridPoint{i, j, tau[i], tau[j], s.S(i, j), i == 0 || j == 0 || i == n - 1 || j == n - 1};
  };
  s.global_min = point(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (s.S(i, j) < s.global_min.S) s.global_min = point(i, j);
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = i + di, b = j + dj;
          if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= n || b >= n) continue;
          if (s.S(a, b) < s.S(i, j)) {
            is_min = false;
            break;
          }
        }
      if (is_min) s.local_minima.push_back(point(i, j));
    }
  int oi = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(tau[i]) < std::abs(tau[oi])) oi = i;
  s.origin = point(oi, oi);
  for (const auto& m : s.local_minima) s.origin_local_min = s.origin_local_min || (m.i == oi && m.j == oi);
  return s;
}

}  // namespace dstlab
