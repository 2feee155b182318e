#include "dstlab/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "dstlab/rng.hpp"

namespace dstlab {

const char* to_string(SolverMode m) { return m == SolverMode::Auxiliary ? "aux" : "constrained"; }

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "Converged";
    case SolverStatus::MaxIterations: return "MaxIterations";
    case SolverStatus::Divergence: return "Divergence";
  }
  return "?";
}

std::vector<std::uint64_t> SolverConfig::default_seeds(int count) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < count; ++i) s.push_back(static_cast<std::uint64_t>(i));
  return s;
}

namespace {

// Objective of one stage: weight_sq - lambda (T - kappa) + w (T - kappa)^2,
// auxiliary mode is lambda = mu, w = 0, kappa = 0.
struct Stage {
  double lambda = 0;
  double w = 0;
  double kappa = 0;
  double value(const ActionParts& a) const {
    const double d = a.weight2 - kappa;
    return a.weight_sq - lambda * d + w * d * d;
  }
  double mu_eff(const ActionParts& a) const { return lambda - 2.0 * w * (a.weight2 - kappa); }
};

struct Probe {
  CMatrix G;  // i[P,Q] S, Hermitian
  double el = 0;
};

Probe probe(const FermionicProjector& P, double mu, const Tolerances& tol) {
  const CMatrix K = P.matrix();
  const CMatrix Q = q_kernel(P, mu, tol).Q;
  const CMatrix C = cplx(0, 1) * (K * Q - Q * K);
  Probe p;
  p.el = commutator_norm(P, C);
  p.G = sig_right(P.space(), C);
  p.G = 0.5 * (p.G + p.G.adjoint()).eval();
  return p;
}

double hermitian_dot(const CMatrix& a, const CMatrix& b) { return (a.adjoint() * b).trace().real(); }

enum class StageEnd { Converged, Stalled, MaxIterations, Divergence };

StageEnd run_stage(FermionicProjector& P, const Stage& st, const SolverConfig& cfg, SeedTrace& tr, int stage_id,
                   bool first_stage) {
  const auto& s = P.space();
  ActionParts parts = action_parts(P);
  double phi = st.value(parts);
  Probe pr = probe(P, st.mu_eff(parts), cfg.tol);
  CMatrix D = -pr.G;
  CMatrix Gprev = pr.G;
  double step = -1;
  const size_t start = tr.objective.size();
  tr.objective.push_back(phi);
  tr.stage.push_back(stage_id);

  if (first_stage) {
    // directional derivative against finite differences
    const double gn = pr.G.norm();
    if (gn > 0) {
      const CMatrix B = sig_left(s, D);
      const double analytic = 4.0 * hermitian_dot(pr.G, D);
      const double h = 1e-5 / gn;
      const double fp = st.value(action_parts(conjugate_by_exp(P, B, h)));
      const double fm = st.value(action_parts(conjugate_by_exp(P, B, -h)));
      const double fd = (fp - fm) / (2 * h);
      tr.fd_check_error = std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-300);
    }
    tr.fd_check_passed = tr.fd_check_error <= cfg.fd_check_tolerance;
  }

  for (int it = 0; it < cfg.max_iterations; ++it) {
    tr.el_residual = pr.el;
    if (pr.el <= cfg.el_tolerance) return StageEnd::Converged;
    double slope = 4.0 * hermitian_dot(pr.G, D);
    if (!(slope < 0)) {
      D = -pr.G;
      slope = 4.0 * hermitian_dot(pr.G, D);
    }
    if (step < 0) step = cfg.initial_step / std::max(D.norm(), 1e-300);
    const CMatrix B = sig_left(s, D);
    bool accepted = false;
    FermionicProjector trial = P;
    ActionParts tparts;
    double tphi = phi;
    while (step * D.norm() > 1e-16) {
      try {
        trial = conjugate_by_exp(P, B, step);
        tparts = action_parts(trial);
        tphi = st.value(tparts);
        if (std::isfinite(tphi) && tphi <= phi + cfg.armijo * step * slope) {
          accepted = true;
          break;
        }
      } catch (const Error&) {
        // precision lost in the exponential; shorter step
      }
      step *= cfg.backtrack;
    }
    ++tr.iterations;
    if (!accepted) return StageEnd::Stalled;
    P = std::move(trial);
    parts = tparts;
    phi = tphi;
    tr.objective.push_back(phi);
    tr.stage.push_back(stage_id);
    if (phi < cfg.divergence_floor) return StageEnd::Divergence;
    step *= cfg.step_growth;

    pr = probe(P, st.mu_eff(parts), cfg.tol);
    if (cfg.conjugate) {
      const double den = hermitian_dot(Gprev, Gprev);
      const double beta = den > 0 ? std::max(0.0, hermitian_dot(pr.G, pr.G - Gprev) / den) : 0.0;
      D = -pr.G + beta * D;
    } else {
      D = -pr.G;
    }
    Gprev = pr.G;

    const size_t n = tr.objective.size();
    const size_t w = static_cast<size_t>(cfg.stall_window);
    if (n - start > w) {
      const double old = tr.objective[n - 1 - w];
      if (old - phi <= cfg.stall_tolerance * (1.0 + std::abs(phi))) return StageEnd::Stalled;
    }
  }
  tr.el_residual = pr.el;
  return pr.el <= cfg.el_tolerance ? StageEnd::Converged : StageEnd::MaxIterations;
}

}  // namespace

SeedTrace descend(FermionicProjector& P, const SolverConfig& cfg, std::uint64_t seed_label) {
  SeedTrace tr;
  tr.seed = seed_label;
  if (cfg.mode == SolverMode::Auxiliary) {
    Stage st{cfg.mu, 0.0, 0.0};
    const StageEnd e = run_stage(P, st, cfg, tr, 0, true);
    tr.status = e == StageEnd::Converged ? SolverStatus::Converged
                : e == StageEnd::Divergence ? SolverStatus::Divergence
                                            : SolverStatus::MaxIterations;
    const auto parts = action_parts(P);
    tr.final_objective = parts.action(cfg.mu);
    tr.constraint = parts.weight2;
    tr.mu_eff = cfg.mu;
    tr.el_residual = el_residual(P, cfg.mu, cfg.tol);
    return tr;
  }
  if (!(cfg.kappa > 0)) throw Error(ErrorCode::InfeasibleKappa, "kappa must be positive");
  Stage st{cfg.mu, cfg.penalty.w0, cfg.kappa};
  StageEnd e = StageEnd::MaxIterations;
  for (int k = 0; k < cfg.penalty.max_outer; ++k) {
    e = run_stage(P, st, cfg, tr, k, k == 0);
    if (e == StageEnd::Divergence) break;
    const auto parts = action_parts(P);
    const double viol = parts.weight2 - cfg.kappa;
    st.lambda = st.mu_eff(parts);
    const double el = el_residual(P, st.lambda, cfg.tol);
    if (std::abs(viol) <= cfg.penalty.violation_tol && el <= cfg.el_tolerance * 10) {
      e = StageEnd::Converged;
      break;
    }
    st.w *= cfg.penalty.growth;
  }
  const auto parts = action_parts(P);
  tr.final_objective = parts.weight_sq;
  tr.constraint = parts.weight2;
  tr.mu_eff = st.lambda;
  tr.el_residual = el_residual(P, st.lambda, cfg.tol);
  const bool feasible = std::abs(parts.weight2 - cfg.kappa) <= cfg.penalty.violation_tol * 100;
  tr.status = e == StageEnd::Divergence ? SolverStatus::Divergence
              : (feasible && tr.el_residual <= cfg.el_tolerance * 10) ? SolverStatus::Converged
                                                                       : SolverStatus::MaxIterations;
  return tr;
}

SolverResult minimize(const DiscreteSpacetime& space, int f, const SolverConfig& cfg) {
  if (f < 1 || f > space.n * space.m) throw Error(ErrorCode::Validation, "need 1 <= f <= nm");
  if (cfg.seeds.empty()) throw Error(ErrorCode::Validation, "empty seed list");
  if (cfg.mode == SolverMode::Constrained && !(cfg.kappa > 0))
    throw Error(ErrorCode::InfeasibleKappa, "kappa must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const size_t ns = cfg.seeds.size();
  std::vector<SeedTrace> traces(ns);
  std::vector<FermionicProjector> finals(ns, FermionicProjector::zero(space));
  std::vector<std::string> errors(ns);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < ns;) {
      try {
        FermionicProjector P = random_projector(space, f, cfg.seeds[i], cfg.init_scale);
        traces[i] = descend(P, cfg, cfg.seeds[i]);
        finals[i] = std::move(P);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  unsigned nt = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, static_cast<unsigned>(ns));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (size_t i = 0; i < ns; ++i)
    if (!errors[i].empty()) throw Error(ErrorCode::EigenFailure, "seed " + std::to_string(cfg.seeds[i]) + ": " + errors[i]);

  SolverResult res;
  size_t best = ns;
  for (size_t i = 0; i < ns; ++i) {
    if (traces[i].status == SolverStatus::Divergence) continue;
    // ties within roundoff go to the lower seed index
    if (best == ns || traces[i].final_objective <
                          traces[best].final_objective - 1e-12 * (1.0 + std::abs(traces[best].final_objective)))
      best = i;
  }
  if (best == ns) {
    res.status = SolverStatus::Divergence;
    best = 0;
  } else {
    res.status = traces[best].status;
  }
  if (cfg.mode == SolverMode::Constrained) {
    bool hit = false;
    for (const auto& t : traces)
      hit = hit || (t.status != SolverStatus::Divergence && std::abs(t.constraint - cfg.kappa) <= 1e-6 * (1.0 + cfg.kappa));
    if (!hit)
      throw Error(ErrorCode::InfeasibleKappa, "no seed reached the constraint value " + std::to_string(cfg.kappa) +
                                                  " (closest " + std::to_string(traces[best].constraint) + ")");
  }
  res.best = finals[best];
  res.best_seed = cfg.seeds[best];
  const auto parts = action_parts(res.best);
  res.action = cfg.mode == SolverMode::Auxiliary ? parts.action(cfg.mu) : parts.weight_sq;
  res.constraint = parts.weight2;
  res.mu_hat = traces[best].mu_eff;
  res.el_residual = traces[best].el_residual;
  res.traces = std::move(traces);
  res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

MultiplierEstimate lagrange_multiplier_estimate(const FermionicProjector& P, int samples, std::uint64_t seed,
                                                double max_residual, const Tolerances& tol) {
  MultiplierEstimate est;
  est.samples = samples;
  const CMatrix K = P.matrix();
  const CMatrix Q0 = q_kernel(P, 0.0, tol).Q;
  const CMatrix Q1 = q_kernel(P, 1.0, tol).Q;
  Rng rng(seed, 0x6d75ULL);
  std::vector<double> dS, dT;
  const double scale = 1.0 / std::sqrt(static_cast<double>(P.space().dim()));
  for (int k = 0; k < samples; ++k) {
    const CMatrix B = random_self_adjoint(P.space(), rng, scale);
    const double s0 = first_variation(K, Q0, B);
    const double s1 = first_variation(K, Q1, B);
    dS.push_back(s0);
    dT.push_back(s0 - s1);
  }
  double st = 0, tt = 0, ss = 0;
  for (int k = 0; k < samples; ++k) {
    st += dS[k] * dT[k];
    tt += dT[k] * dT[k];
    ss += dS[k] * dS[k];
  }
  // dT ~ 0: the point is stationary for T itself and any mu fits
  const double T = action_parts(P).weight2;
  if (std::sqrt(tt / samples) <= 1e-6 * std::max(1.0, T)) return est;
  est.mu_hat = st / tt;
  double rr = 0;
  for (int k = 0; k < samples; ++k) rr += std::pow(dS[k] - est.mu_hat * dT[k], 2);
  est.residual = std::sqrt(rr) / std::max(std::sqrt(ss), 1e-300);
  est.status = est.residual <= max_residual ? FitStatus::Ok : FitStatus::Inconclusive;
  return est;
}

std::vector<LandscapeRow> landscape_scan(const std::function<FermionicProjector(double)>& family,
                                         const std::vector<double>& grid, double mu, int x, int y,
                                         const Tolerances& tol) {
  std::vector<LandscapeRow> rows;
  for (double p : grid) {
    LandscapeRow r;
    r.param = p;
    try {
      const FermionicProjector P = family(p);
      const auto parts = action_parts(P);
      r.action = parts.action(mu);
      r.constraint = parts.weight2;
      const auto c = closed_chain(P, x, y);
      r.roots = c.roots;
      r.kind = classify(c, tol).kind;
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace dstlab
