#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dstlab/causal.hpp"
#include "dstlab/indefinite.hpp"

namespace dstlab {

enum class SolverMode { Auxiliary, Constrained };
enum class SolverStatus { Converged, MaxIterations, Divergence };

const char* to_string(SolverMode m);
const char* to_string(SolverStatus s);

// Augmented Lagrangian on T = sum |A_xy|^2.
struct PenaltySchedule {
  double w0 = 10.0;
  double growth = 4.0;
  int max_outer = 10;
  double violation_tol = 1e-8;
};

struct SolverConfig {
  SolverMode mode = SolverMode::Auxiliary;
  double mu = 0.5;     // Auxiliary: the multiplier. Constrained: initial multiplier guess.
  double kappa = 0.9;  // Constrained only
  PenaltySchedule penalty;
  std::vector<std::uint64_t> seeds = default_seeds(32);
  int max_iterations = 3000;  // per stage
  double el_tolerance = 1e-7;
  double stall_tolerance = 1e-15;  // relative decrease over stall_window iterations
  int stall_window = 50;
  double initial_step = 0.05;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double step_growth = 2.0;
  double divergence_floor = -1e6;
  bool conjugate = true;
  double init_scale = -1;  // random_projector scale, -1 = default
  double fd_check_tolerance = 1e-4;
  int threads = 0;  // 0 = hardware concurrency
  Tolerances tol;

  static std::vector<std::uint64_t> default_seeds(int count);
};

struct SeedTrace {
  std::uint64_t seed = 0;
  SolverStatus status = SolverStatus::MaxIterations;
  std::vector<double> objective;  // per accepted iterate
  std::vector<int> stage;         // outer stage of each entry (0 in auxiliary mode)
  double final_objective = 0;
  double el_residual = 0;
  double constraint = 0;
  double mu_eff = 0;
  int iterations = 0;
  double fd_check_error = 0;  // relative, first iterate
  bool fd_check_passed = false;
};

struct SolverResult {
  FermionicProjector best = FermionicProjector::zero(DiscreteSpacetime(1, 1));
  std::uint64_t best_seed = 0;
  SolverStatus status = SolverStatus::MaxIterations;
  double action = 0;      // S_mu (auxiliary) or sum |A^2| (constrained)
  double constraint = 0;  // sum |A|^2
  double mu_hat = 0;
  double el_residual = 0;
  std::vector<SeedTrace> traces;
  double wall_time_s = 0;
};

// One descent run from a given start.
SeedTrace descend(FermionicProjector& P, const SolverConfig& cfg, std::uint64_t seed_label = 0);

SolverResult minimize(const DiscreteSpacetime& space, int f, const SolverConfig& cfg);

enum class FitStatus { Ok, Inconclusive };

struct MultiplierEstimate {
  FitStatus status = FitStatus::Inconclusive;
  double mu_hat = 0;
  double residual = 0;  // || dS0 - mu dT || / || dS0 ||
  int samples = 0;
};

// Fit dS0 = mu dT over random self-adjoint directions, S0 = sum |A^2|.
// Inconclusive when T is itself stationary (dT ~ 0) or the fit residual exceeds max_residual.
MultiplierEstimate lagrange_multiplier_estimate(const FermionicProjector& P, int samples = 24,
                                                std::uint64_t seed = 7, double max_residual = 1e-3,
                                                const Tolerances& tol = {});

struct LandscapeRow {
  double param = 0;
  bool ok = false;
  std::string error;
  double action = 0;
  double constraint = 0;
  CVector roots;  // of the chain (x, y)
  CausalKind kind = CausalKind::Undetermined;
};

std::vector<LandscapeRow> landscape_scan(const std::function<FermionicProjector(double)>& family,
                                         const std::vector<double>& grid, double mu, int x = 0, int y = 1,
                                         const Tolerances& tol = {});

}  // namespace dstlab
