// dstlab: batch runner for the discrete space-time toolkit.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "dstlab/causal.hpp"
#include "dstlab/correlation.hpp"
#include "dstlab/io.hpp"
#include "dstlab/lattice.hpp"
#include "dstlab/lightcone.hpp"
#include "dstlab/rng.hpp"
#include "dstlab/sea.hpp"
#include "dstlab/solver.hpp"

namespace fs = std::filesystem;
using namespace dstlab;

namespace {

constexpr const char* kVersion = "0.1.0";

enum class Kind { Number, Integer, String, Bool, Array, Object };

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Number: return "number";
    case Kind::Integer: return "integer";
    case Kind::String: return "string";
    case Kind::Bool: return "boolean";
    case Kind::Array: return "array";
    case Kind::Object: return "object";
  }
  return "?";
}

bool has_kind(const json& v, Kind k) {
  switch (k) {
    case Kind::Number: return v.is_number();
    case Kind::Integer: return v.is_number_integer();
    case Kind::String: return v.is_string();
    case Kind::Bool: return v.is_boolean();
    case Kind::Array: return v.is_array();
    case Kind::Object: return v.is_object();
  }
  return false;
}

void check_schema(const json& cfg, const std::map<std::string, Kind>& schema, const std::string& where = "config") {
  if (!cfg.is_object()) throw Error(ErrorCode::Validation, where + " must be a JSON object");
  for (const auto& [k, v] : cfg.items()) {
    auto it = schema.find(k);
    if (it == schema.end()) throw Error(ErrorCode::Validation, where + ": unknown key '" + k + "'");
    if (!has_kind(v, it->second))
      throw Error(ErrorCode::Validation, where + ": '" + k + "' must be of type " + kind_name(it->second));
  }
}

template <typename T>
T get_or(const json& cfg, const std::string& key, T fallback) {
  return cfg.contains(key) ? cfg[key].get<T>() : fallback;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Validation, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Validation, what + " is not valid JSON: " + e.what());
  }
}

// Everything is computed in memory first, then written, so failures leave no partial outputs.
struct Run {
  std::string subcommand;
  json config = json::object();
  std::vector<std::pair<std::string, std::string>> outputs;
  json extra = json::object();
  std::string started = utc_now();

  void add(const std::string& name, const std::string& content) { outputs.emplace_back(name, content); }
  void add(const std::string& name, const json& j) { add(name, j.dump(2) + "\n"); }

  void write(const fs::path& dir) const {
    fs::create_directories(dir);
    json files = json::array();
    for (const auto& [name, content] : outputs) {
      std::ofstream out(dir / name, std::ios::binary);
      out << content;
      if (!out) throw Error(ErrorCode::Validation, "cannot write '" + (dir / name).string() + "'");
      files.push_back({{"file", name}, {"bytes", content.size()}, {"fnv1a64", hex64(fnv1a64(content))}});
    }
    json platform = {{"compiler", __VERSION__},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
#if defined(__linux__)
                     {"os", "linux"}
#elif defined(__APPLE__)
                     {"os", "darwin"}
#else
                     {"os", "other"}
#endif
    };
    json m = {{"tool", "dstlab"},
              {"version", kVersion},
              {"subcommand", subcommand},
              {"config", config},
              {"config_hash", config_hash(config)},
              {"rng", Rng::algorithm},
              {"platform", platform},
              {"started", started},
              {"finished", utc_now()},
              {"outputs", files}};
    if (!extra.empty()) m["notes"] = extra;
    std::ofstream(dir / "manifest.json") << m.dump(2) << "\n";
  }
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::Validation:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::GridCoverage:
    case ErrorCode::InfeasibleKappa:
      return 2;
    case ErrorCode::Divergence:
      return 4;
    default:
      return 3;
  }
}

int status_code(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return 0;
    case SolverStatus::MaxIterations: return 3;
    case SolverStatus::Divergence: return 4;
  }
  return 3;
}

// ---- projector sources shared by classify-causal and pauli-vectors

const std::map<std::string, Kind> kSourceSchema = {
    {"projector_file", Kind::String}, {"projector", Kind::Object}, {"triangle_v", Kind::Number},
    {"tetrahedron", Kind::Bool}};

FermionicProjector projector_source(const json& cfg) {
  int n = 0;
  for (const char* k : {"projector_file", "projector", "triangle_v", "tetrahedron"}) n += cfg.contains(k) ? 1 : 0;
  if (n != 1)
    throw Error(ErrorCode::Validation, "give exactly one of projector_file, projector, triangle_v, tetrahedron");
  if (cfg.contains("projector")) return projector_from_json(cfg["projector"]);
  if (cfg.contains("triangle_v")) return triangle_projector(cfg["triangle_v"].get<double>());
  if (cfg.contains("tetrahedron")) return projector_from_correlations(regular_tetrahedron());
  json j = parse_json(read_file(cfg["projector_file"].get<std::string>()), "projector file");
  // accept a solver result as well
  if (j.is_object() && j.contains("projector") && j.contains("seeds")) j = j["projector"];
  return projector_from_json(j);
}

void emit_causal(Run& run, const FermionicProjector& P, const Tolerances& tol) {
  const CausalGraph g = causal_graph(P, tol);
  run.add("causal_graph.json", causal_graph_json(g) + "\n");
  run.add("causal_graph.dimacs", causal_graph_dimacs(g));
}

void emit_pauli(Run& run, const FermionicProjector& P, const std::string& suffix = "") {
  const LocalCorrelation L = local_correlations(P);
  run.add("pauli_vectors" + suffix + ".csv", pauli_vectors_csv(L));
  json geo = {{"points", to_json(L)},
              {"sum_rule_defect", sum_rule_defect(L)},
              {"signature_defect", signature_defect(L)}};
  if (L.m() >= 2) geo["geometry"] = to_json(geometry_diagnostics(L));
  run.add("geometry" + suffix + ".json", geo);
  if (L.m() == 4) run.add("symmetry_certificate" + suffix + ".json", to_json(full_symmetry_impossibility_check(L, 1e-6)));
}

// ---- subcommands

struct MinimizeFlags {
  std::vector<std::uint64_t> seeds;
  std::string mode;
  double mu = std::nan("");
  double kappa = std::nan("");
};

int cmd_minimize(Run& run, const json& cfg, const MinimizeFlags& fl, const Tolerances& tol) {
  check_schema(cfg, {{"n", Kind::Integer},
                     {"m", Kind::Integer},
                     {"f", Kind::Integer},
                     {"mode", Kind::String},
                     {"mu", Kind::Number},
                     {"kappa", Kind::Number},
                     {"seeds", Kind::Array},
                     {"seed_count", Kind::Integer},
                     {"max_iterations", Kind::Integer},
                     {"el_tolerance", Kind::Number},
                     {"threads", Kind::Integer},
                     {"penalty", Kind::Object}});
  SolverConfig sc;
  sc.tol = tol;
  const int n = get_or(cfg, "n", 1), m = get_or(cfg, "m", 4), f = get_or(cfg, "f", 2);
  std::string mode = fl.mode.empty() ? get_or<std::string>(cfg, "mode", "aux") : fl.mode;
  if (mode == "aux") sc.mode = SolverMode::Auxiliary;
  else if (mode == "constrained") sc.mode = SolverMode::Constrained;
  else throw Error(ErrorCode::Validation, "mode must be 'aux' or 'constrained'");
  sc.mu = std::isnan(fl.mu) ? get_or(cfg, "mu", 1.0 / (2.0 * n)) : fl.mu;
  sc.kappa = std::isnan(fl.kappa) ? get_or(cfg, "kappa", sc.kappa) : fl.kappa;
  if (sc.mode == SolverMode::Constrained && !cfg.contains("mu") && std::isnan(fl.mu)) sc.mu = 0.5;
  if (!fl.seeds.empty()) sc.seeds = fl.seeds;
  else if (cfg.contains("seeds")) {
    sc.seeds.clear();
    for (const auto& s : cfg["seeds"]) {
      if (!s.is_number_unsigned()) throw Error(ErrorCode::Validation, "seeds must be non-negative integers");
      sc.seeds.push_back(s.get<std::uint64_t>());
    }
  } else if (cfg.contains("seed_count")) {
    const int c = cfg["seed_count"].get<int>();
    if (c < 1) throw Error(ErrorCode::Validation, "seed_count must be positive");
    sc.seeds = SolverConfig::default_seeds(c);
  }
  sc.max_iterations = get_or(cfg, "max_iterations", sc.max_iterations);
  sc.el_tolerance = get_or(cfg, "el_tolerance", sc.el_tolerance);
  sc.threads = get_or(cfg, "threads", 0);
  if (cfg.contains("penalty")) {
    const json& p = cfg["penalty"];
    check_schema(p, {{"w0", Kind::Number}, {"growth", Kind::Number}, {"max_outer", Kind::Integer},
                     {"violation_tol", Kind::Number}},
                 "penalty");
    sc.penalty.w0 = get_or(p, "w0", sc.penalty.w0);
    sc.penalty.growth = get_or(p, "growth", sc.penalty.growth);
    sc.penalty.max_outer = get_or(p, "max_outer", sc.penalty.max_outer);
    sc.penalty.violation_tol = get_or(p, "violation_tol", sc.penalty.violation_tol);
  }
  if (sc.max_iterations < 1 || !(sc.el_tolerance > 0)) throw Error(ErrorCode::Validation, "bad iteration settings");
  const DiscreteSpacetime space(n, m);
  const SolverResult r = minimize(space, f, sc);
  json res = to_json(r, sc.mode);
  res["n"] = n;
  res["m"] = m;
  res["f"] = f;
  res["mu"] = sc.mu;
  if (sc.mode == SolverMode::Constrained) {
    res["kappa"] = sc.kappa;
    const MultiplierEstimate est = lagrange_multiplier_estimate(r.best, 24, 7, 1e-3, tol);
    res["multiplier_fit"] = {{"mu_hat", est.mu_hat}, {"residual", est.residual},
                             {"status", est.status == FitStatus::Ok ? "Ok" : "Inconclusive"}};
  }
  run.add("result.json", res);
  run.add("traces.csv", solver_traces_csv(r));
  emit_causal(run, r.best, tol);
  if (n == 1 && f == 2) emit_pauli(run, r.best);
  run.extra["wall_time_s"] = r.wall_time_s;
  return status_code(r.status);
}

int cmd_classify(Run& run, const json& cfg, const Tolerances& tol) {
  check_schema(cfg, kSourceSchema);
  emit_causal(run, projector_source(cfg), tol);
  return 0;
}

int cmd_pauli(Run& run, const json& cfg) {
  check_schema(cfg, kSourceSchema);
  emit_pauli(run, projector_source(cfg));
  return 0;
}

std::vector<LandscapeRow> triangle_sweep(double lo, double hi, int points, double mu, const Tolerances& tol) {
  if (points < 2 || !(hi > lo)) throw Error(ErrorCode::Validation, "need points >= 2 and v_max > v_min");
  if (lo < 2.0 / 3.0 - 1e-12) throw Error(ErrorCode::Validation, "the triangle family needs v >= 2/3");
  return landscape_scan([](double v) { return triangle_projector(v); }, linspace(lo, hi, points), mu, 0, 1, tol);
}

json sweep_json(const std::vector<LandscapeRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json row = {{"v", r.param}, {"ok", r.ok}};
    if (r.ok) {
      row["action"] = r.action;
      row["constraint"] = r.constraint;
      row["kind"] = to_string(r.kind);
    } else {
      row["error"] = r.error;
    }
    out.push_back(row);
  }
  return out;
}

int cmd_landscape(Run& run, const json& cfg, const Tolerances& tol) {
  check_schema(cfg, {{"v_min", Kind::Number}, {"v_max", Kind::Number}, {"points", Kind::Integer}, {"mu", Kind::Number}});
  const auto rows = triangle_sweep(get_or(cfg, "v_min", 2.0 / 3.0), get_or(cfg, "v_max", 1.0),
                                   get_or(cfg, "points", 101), get_or(cfg, "mu", 0.5), tol);
  run.add("fig3.csv", fig3_csv(rows));
  run.add("landscape.json", sweep_json(rows));
  return 0;
}

int cmd_lattice(Run& run, const json& cfg) {
  check_schema(cfg, {{"Nt", Kind::Integer},
                     {"Nr", Kind::Integer},
                     {"convention", Kind::String},
                     {"weights", Kind::String},
                     {"states", Kind::Array},
                     {"tau_min", Kind::Number},
                     {"tau_max", Kind::Number},
                     {"points", Kind::Integer},
                     {"threads", Kind::Integer}});
  LatticeGeometry g;
  g.Nt = get_or(cfg, "Nt", 8);
  g.Nr = get_or(cfg, "Nr", 6);
  g.convention = phase_convention_from_string(get_or<std::string>(cfg, "convention", "dft"));
  g.validate();
  LatticeOccupation occ{{-1, 1, 1.0, 0.0}, {-2, 2, 1.0, 0.0}};
  if (cfg.contains("states")) {
    occ.clear();
    for (const auto& s : cfg["states"]) {
      check_schema(s, {{"omega", Kind::Integer}, {"k", Kind::Integer}, {"phi", Kind::Number}}, "state");
      if (!s.contains("omega") || !s.contains("k")) throw Error(ErrorCode::Validation, "state needs omega and k");
      occ.push_back({s["omega"].get<int>(), s["k"].get<int>(), get_or(s, "phi", 1.0), 0.0});
    }
  }
  for (const auto& s : occ)
    if (!g.contains_dual(s.omega, s.k)) throw Error(ErrorCode::Validation, "occupied point outside the dual lattice");
  const int points = get_or(cfg, "points", 61);
  if (points < 3) throw Error(ErrorCode::Validation, "need at least 3 grid points");
  const auto w = lattice_weights(g, weight_preset_from_string(get_or<std::string>(cfg, "weights", "default")));
  const auto surf = landscape_scan_2d(g, occ, linspace(get_or(cfg, "tau_min", -3.0), get_or(cfg, "tau_max", 3.0), points),
                                      w, get_or(cfg, "threads", 0));
  run.add("surface.csv", landscape_csv(surf));
  run.add("minima.json", to_json(surf));
  return 0;
}

int cmd_lightcone(Run& run, const json& cfg) {
  check_schema(cfg, {{"fixed", Kind::Object}, {"region", Kind::String}});
  std::map<lightcone::Symbol, lightcone::Rational> fixed;
  if (cfg.contains("fixed"))
    for (const auto& [k, v] : cfg["fixed"].items()) {
      if (!v.is_string() && !v.is_number_integer())
        throw Error(ErrorCode::Validation, "fixed values are integers or rational strings like \"3/2\"");
      fixed[lightcone::symbol_from_string(k)] = v.is_string() ? rational_from_string(v.get<std::string>())
                                                              : lightcone::Rational(v.get<long long>());
    }
  const std::string region = get_or<std::string>(cfg, "region", "away");
  if (region != "away" && region != "distributional")
    throw Error(ErrorCode::Validation, "region must be 'away' or 'distributional'");
  const auto P = lightcone::kernel_expansion(fixed);
  const auto A = lightcone::multiply(P, P.conjugate(),
                                     region == "away" ? lightcone::Region::AwayFromCone : lightcone::Region::Distributional);
  const auto M = lightcone::trace_free_gradient(A);
  run.add("expansion.json", json{{"kernel", to_json(P)}, {"closed_chain", to_json(A)}, {"gradient", to_json(M)}});
  return 0;
}

int cmd_stability(Run& run, const json& cfg) {
  check_schema(cfg, {{"csv", Kind::String}, {"masses", Kind::Array}, {"weights", Kind::Array}, {"tol", Kind::Number}});
  if (!cfg.contains("csv") || !cfg.contains("masses"))
    throw Error(ErrorCode::Validation, "state-stability needs 'csv' and 'masses'");
  SeaConfig seas;
  for (const auto& m : cfg["masses"]) {
    if (!m.is_number()) throw Error(ErrorCode::Validation, "masses must be numbers");
    seas.masses.push_back(m.get<double>());
  }
  if (cfg.contains("weights")) {
    for (const auto& w : cfg["weights"]) {
      if (!w.is_number()) throw Error(ErrorCode::Validation, "weights must be numbers");
      seas.weights.push_back(w.get<double>());
    }
  } else {
    seas.weights.assign(seas.masses.size(), 1.0);
  }
  const auto fns = stability_functions_from_csv(read_file(cfg["csv"].get<std::string>()));
  run.add("verdict.json", to_json(state_stability_check(fns, seas, get_or(cfg, "tol", 1e-9))));
  return 0;
}

int cmd_reproduce(Run& run, const std::string& figure, const Tolerances& tol) {
  if (figure == "fig1-2") {
    json summary = json::array();
    int code = 0;
    for (int m : {4, 5, 8, 9}) {
      SolverConfig sc;
      sc.tol = tol;
      sc.mu = 0.5;
      const SolverResult r = minimize(DiscreteSpacetime(1, m), 2, sc);
      const LocalCorrelation L = local_correlations(r.best);
      const GeometryReport g = geometry_diagnostics(L);
      run.add("pauli_vectors_m" + std::to_string(m) + ".csv", pauli_vectors_csv(L));
      summary.push_back({{"m", m}, {"status", to_string(r.status)}, {"best_seed", r.best_seed}, {"action", r.action},
                         {"el_residual", r.el_residual}, {"geometry", to_json(g)}});
      code = std::max(code, status_code(r.status));
    }
    run.add("fig1-2_summary.json", summary);
    return code;
  }
  if (figure == "fig3") {
    const double vc = 4.0 * std::sqrt(3.0) / 9.0;
    auto rows = triangle_sweep(2.0 / 3.0, 1.0, 101, 0.5, tol);
    const auto extra = landscape_scan([](double v) { return triangle_projector(v); }, {vc}, 0.5, 0, 1, tol);
    rows.insert(rows.end(), extra.begin(), extra.end());
    std::sort(rows.begin(), rows.end(), [](const LandscapeRow& a, const LandscapeRow& b) { return a.param < b.param; });
    run.add("fig3.csv", fig3_csv(rows));
    return 0;
  }
  if (figure == "fig5") {
    LatticeGeometry g;
    const LatticeOccupation occ{{-1, 1, 1.0, 0.0}, {-2, 2, 1.0, 0.0}};
    const auto surf = landscape_scan_2d(g, occ, linspace(-3.0, 3.0, 61), lattice_weights(g));
    run.add("fig5_surface.csv", landscape_csv(surf));
    run.add("fig5_minima.json", to_json(surf));
    return 0;
  }
  throw Error(ErrorCode::Validation, "unknown figure '" + figure + "' (fig1-2, fig3, fig5)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dstlab: discrete space-time experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir, tol_path, figure;
  MinimizeFlags fl;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--config", config_path, "JSON config file");
    sc->add_option("--out", out_dir, "output directory (default $DSTLAB_OUT/<subcommand> or ./dstlab-out/<subcommand>)");
    sc->add_option("--tolerances", tol_path, "JSON tolerance overrides");
  };
  auto* mini = app.add_subcommand("minimize", "multi-start minimization of the action");
  common(mini);
  mini->add_option("--seed-list", fl.seeds, "comma separated seeds")->delimiter(',');
  mini->add_option("--mode", fl.mode, "aux or constrained");
  mini->add_option("--mu", fl.mu, "Lagrange multiplier (aux mode)");
  mini->add_option("--kappa", fl.kappa, "constraint value (constrained mode)");
  for (const char* name : {"classify-causal", "pauli-vectors", "landscape", "lattice", "lightcone-check", "state-stability"})
    common(app.add_subcommand(name));
  auto* rep = app.add_subcommand("reproduce", "canned figure data");
  rep->add_option("figure", figure, "fig1-2, fig3 or fig5")->required();
  rep->add_option("--out", out_dir, "output directory");
  rep->add_option("--tolerances", tol_path, "JSON tolerance overrides");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  Run run;
  run.subcommand = sub->get_name();
  try {
    if (!config_path.empty()) run.config = parse_json(read_file(config_path), "config");
    if (!run.config.is_object()) throw Error(ErrorCode::Validation, "config must be a JSON object");
    Tolerances tol;
    if (!tol_path.empty()) tol = tolerances_from_json(parse_json(read_file(tol_path), "tolerances"));
    if (run.subcommand == "minimize") {
      if (!fl.seeds.empty()) run.config["--seed-list"] = fl.seeds;
      if (!fl.mode.empty()) run.config["--mode"] = fl.mode;
      if (!std::isnan(fl.mu)) run.config["--mu"] = fl.mu;
      if (!std::isnan(fl.kappa)) run.config["--kappa"] = fl.kappa;
    }
    if (run.subcommand == "reproduce") run.config["figure"] = figure;
    if (!tol_path.empty()) run.config["tolerances"] = to_json(tol);

    json cfg = run.config;
    for (const char* k : {"--seed-list", "--mode", "--mu", "--kappa", "tolerances", "figure"}) cfg.erase(k);
    int code = 0;
    const std::string& s = run.subcommand;
    if (s == "minimize") code = cmd_minimize(run, cfg, fl, tol);
    else if (s == "classify-causal") code = cmd_classify(run, cfg, tol);
    else if (s == "pauli-vectors") code = cmd_pauli(run, cfg);
    else if (s == "landscape") code = cmd_landscape(run, cfg, tol);
    else if (s == "lattice") code = cmd_lattice(run, cfg);
    else if (s == "lightcone-check") code = cmd_lightcone(run, cfg);
    else if (s == "state-stability") code = cmd_stability(run, cfg);
    else if (s == "reproduce") code = cmd_reproduce(run, figure, tol);

    fs::path dir = out_dir;
    if (dir.empty()) {
      const char* root = std::getenv("DSTLAB_OUT");
      dir = fs::path(root ? root : "dstlab-out") / (s == "reproduce" ? figure : s);
    }
    run.write(dir);
    std::cerr << "dstlab " << s << ": wrote " << run.outputs.size() << " files and manifest.json to " << dir.string()
              << "\n";
    return code;
  } catch (const Error& e) {
    std::cerr << "dstlab: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const json::exception& e) {
    std::cerr << "dstlab: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dstlab: " << e.what() << "\n";
    return 3;
  }
}
