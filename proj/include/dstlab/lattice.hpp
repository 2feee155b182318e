#pragma once

#include <string>
#include <vector>

#include "dstlab/minkowski.hpp"

namespace dstlab {

// Literal: e^{-i omega t}, K(k r). Dft: the dual lattice is the DFT dual of the periodic one,
// e^{-i omega t / N_t}, K(k r / N_r). With spacing 2 pi the literal phases are all 1.
enum class PhaseConvention { Dft, Literal };
const char* to_string(PhaseConvention c);
PhaseConvention phase_convention_from_string(const std::string& s);

// Positions (2 pi i, 2 pi j), dual points omega in {-(N_t-1)..0}, k in {1..N_r}.
struct LatticeGeometry {
  int Nt = 8;
  int Nr = 6;
  PhaseConvention convention = PhaseConvention::Dft;

  void validate() const;
  double t(int i) const;
  double r(int j) const;
  bool contains_dual(int omega, int k) const { return omega <= 0 && omega > -Nt && k >= 1 && k <= Nr; }
};

// v = phi (cosh tau, sinh tau), so v_j v^j = phi^2 by construction.
struct OccupiedState {
  int omega = 0;
  int k = 1;
  double phi = 1.0;
  double tau = 0.0;
  double v0() const;
  double vr() const;
};

using LatticeOccupation = std::vector<OccupiedState>;

// sin(x)/x and i (sin(x)/x^2 - cos(x)/x), with their limits at 0.
double kernel_k0(double x);
cplx kernel_k1(double x);

enum class WeightPreset { Default, Uniform, LinearRadial };
const char* to_string(WeightPreset w);
WeightPreset weight_preset_from_string(const std::string& s);

struct LatticeWeights {
  std::vector<double> rho_t;  // per time index
  std::vector<double> rho_r;  // per radial index
};

// Default: rho_t = 1 at t = 0 and 2 otherwise, rho_r = j^2 with 1/12 at j = 0.
// Uniform: all 1. LinearRadial: rho_t as default, rho_r = j with 1/4 at j = 0.
LatticeWeights lattice_weights(const LatticeGeometry& g, WeightPreset preset = WeightPreset::Default);

// 4x4 kernel at position (i, j), i.e. t = 2 pi i, r = 2 pi j.
Mat4c lattice_kernel(const LatticeGeometry& g, const LatticeOccupation& occ, int i, int j);

struct LatticeAction {
  double S = 0;
  RMatrix L;  // Nt x Nr Lagrangian field
  int eigen_failures = 0;
};

// A = P P^* with the Dirac adjoint, critical Lagrangian with mu = 1/4.
LatticeAction lattice_action(const LatticeGeometry& g, const LatticeOccupation& occ, const LatticeWeights& w);

double trace_condition(const LatticeOccupation& occ);
LatticeOccupation enforce_trace(LatticeOccupation occ, double target);

struct GridPoint {
  int i = 0, j = 0;
  double tau1 = 0, tau2 = 0;
  double S = 0;
  bool on_boundary = false;
};

struct LandscapeSurface {
  std::vector<double> tau;  // same grid on both axes
  RMatrix S;                // S(tau1[i], tau2[j])
  std::vector<GridPoint> local_minima;  // value <= all existing neighbours
  GridPoint global_min;
  GridPoint origin;  // nearest grid point to (0, 0)
  bool origin_local_min = false;
};

// Two occupied states with free boosts, amplitudes fixed. Rows run in parallel.
LandscapeSurface landscape_scan_2d(const LatticeGeometry& g, const LatticeOccupation& pair,
                                   const std::vector<double>& tau, const LatticeWeights& w, int threads = 0);

std::vector<double> linspace(double a, double b, int n);

}  // namespace dstlab
