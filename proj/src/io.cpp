#include "dstlab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace dstlab {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json complex_pair(const cplx& z) { return json::array({z.real(), z.imag()}); }

json roots_json(const CVector& r) {
  json a = json::array();
  for (Eigen::Index i = 0; i < r.size(); ++i) a.push_back(complex_pair(r[i]));
  return a;
}

}  // namespace

json to_json(const FermionicProjector& P) {
  json re = json::array(), im = json::array();
  const CMatrix& U = P.basis();
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (Eigen::Index k = 0; k < U.cols(); ++k) {
      r.push_back(U(i, k).real());
      c.push_back(U(i, k).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"n", P.space().n}, {"m", P.space().m}, {"basis", {{"re", re}, {"im", im}}}};
}

FermionicProjector projector_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Validation, "projector must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (k != "n" && k != "m" && k != "basis") throw Error(ErrorCode::Validation, "unknown projector key '" + k + "'");
  if (!j.contains("n") || !j.contains("m") || !j.contains("basis") || !j["n"].is_number_integer() ||
      !j["m"].is_number_integer())
    throw Error(ErrorCode::Validation, "projector needs integer n, m and a basis");
  const DiscreteSpacetime s(j["n"].get<int>(), j["m"].get<int>());
  const json& b = j["basis"];
  if (!b.is_object() || !b.contains("re") || !b["re"].is_array())
    throw Error(ErrorCode::Validation, "basis needs a 're' matrix");
  const json& re = b["re"];
  const json im = b.contains("im") ? b["im"] : json();
  if (static_cast<int>(re.size()) != s.dim()) throw Error(ErrorCode::Validation, "basis must have 2nm rows");
  const size_t f = re.empty() ? 0 : re[0].size();
  CMatrix U(s.dim(), static_cast<Eigen::Index>(f));
  for (int i = 0; i < s.dim(); ++i) {
    if (!re[i].is_array() || re[i].size() != f) throw Error(ErrorCode::Validation, "ragged basis");
    for (size_t k = 0; k < f; ++k) {
      if (!re[i][k].is_number()) throw Error(ErrorCode::Validation, "basis entries must be numbers");
      double x = re[i][k].get<double>(), y = 0;
      if (!im.is_null()) {
        if (!im[i][k].is_number()) throw Error(ErrorCode::Validation, "basis entries must be numbers");
        y = im[i][k].get<double>();
      }
      U(i, static_cast<Eigen::Index>(k)) = cplx(x, y);
    }
  }
  return FermionicProjector(s, U);
}

json to_json(const Tolerances& t) {
  return {{"projector", t.projector},
          {"reorthonormalize", t.reorthonormalize},
          {"degenerate_root", t.degenerate_root},
          {"modulus_collision", t.modulus_collision},
          {"eigvec_condition", t.eigvec_condition},
          {"fd_step", t.fd_step},
          {"causal_rel", t.causal_rel},
          {"light_cone", t.light_cone}};
}

Tolerances tolerances_from_json(const json& j, Tolerances t) {
  if (!j.is_object()) throw Error(ErrorCode::Validation, "tolerances must be a JSON object");
  std::map<std::string, double*> slot{{"projector", &t.projector},
                                      {"reorthonormalize", &t.reorthonormalize},
                                      {"degenerate_root", &t.degenerate_root},
                                      {"modulus_collision", &t.modulus_collision},
                                      {"eigvec_condition", &t.eigvec_condition},
                                      {"fd_step", &t.fd_step},
                                      {"causal_rel", &t.causal_rel},
                                      {"light_cone", &t.light_cone}};
  for (const auto& [k, v] : j.items()) {
    auto it = slot.find(k);
    if (it == slot.end()) throw Error(ErrorCode::Validation, "unknown tolerance '" + k + "'");
    if (!v.is_number() || !(v.get<double>() > 0))
      throw Error(ErrorCode::Validation, "tolerance '" + k + "' must be a positive number");
    *it->second = v.get<double>();
  }
  return t;
}

json to_json(const CausalClass& c) {
  return {{"kind", to_string(c.kind)}, {"roots", roots_json(c.roots)}, {"tau_im", c.tau_im}, {"tau_mod", c.tau_mod}};
}

json to_json(const SolverResult& r, SolverMode mode) {
  json seeds = json::array();
  for (const auto& t : r.traces)
    seeds.push_back({{"seed", t.seed},
                     {"status", to_string(t.status)},
                     {"objective", t.final_objective},
                     {"constraint", t.constraint},
                     {"mu_eff", t.mu_eff},
                     {"el_residual", t.el_residual},
                     {"iterations", t.iterations},
                     {"fd_check_error", t.fd_check_error},
                     {"fd_check_passed", t.fd_check_passed}});
  return {{"mode", to_string(mode)},
          {"status", to_string(r.status)},
          {"best_seed", r.best_seed},
          {"action", r.action},
          {"constraint", r.constraint},
          {"mu_hat", r.mu_hat},
          {"el_residual", r.el_residual},
          {"projector", to_json(r.best)},
          {"seeds", seeds}};
}

json to_json(const LocalCorrelation& L) {
  json pts = json::array();
  for (int x = 0; x < L.m(); ++x)
    pts.push_back({{"x", x}, {"rho", L.rho[x]}, {"v", {L.v[x][0], L.v[x][1], L.v[x][2]}}});
  return pts;
}

json to_json(const GeometryReport& g) {
  json cos = json::array();
  for (Eigen::Index i = 0; i < g.cosines.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < g.cosines.cols(); ++k)
      row.push_back(std::isnan(g.cosines(i, k)) ? json() : json(g.cosines(i, k)));
    cos.push_back(row);
  }
  return {{"lengths", g.lengths},
          {"mean_length", g.mean_length},
          {"length_spread", g.length_spread},
          {"max_rel_dev_2_over_m", g.max_rel_dev_2_over_m},
          {"cosines", cos},
          {"simplex_error", g.simplex_error},
          {"min_angle", g.min_angle},
          {"degenerate", g.degenerate}};
}

json to_json(const ImpossibilityCertificate& c) {
  json reps = json::array();
  for (const auto& r : c.reports)
    reps.push_back({{"perm", r.perm}, {"odd", is_odd(r.perm)}, {"verdict", to_string(r.verdict)},
                    {"residual", r.residual}, {"evidence", r.evidence}});
  return {{"tetrahedral_conditions", c.tetrahedral_conditions},
          {"certificate", c.certificate},
          {"odd_tested", c.odd_tested},
          {"odd_not_realized", c.odd_not_realized},
          {"even_realized", c.even_realized},
          {"permutations", reps}};
}

json to_json(const StabilityVerdict& v) {
  json viol = json::array();
  for (const auto& x : v.violations)
    viol.push_back({{"condition", x.condition}, {"cell", x.cell}, {"qsq", x.qsq}, {"value", x.value}, {"mass", x.mass}});
  return {{"verdict", v.stable ? "Stable" : "Unstable"},
          {"min_a", v.min_a},
          {"inf_a_plus_b", v.inf_ab},
          {"shell_a_plus_b", v.shell_ab},
          {"violations", viol}};
}

json to_json(const LandscapeSurface& s) {
  auto pt = [](const GridPoint& p) {
    return json{{"tau1", p.tau1}, {"tau2", p.tau2}, {"S", p.S}, {"on_boundary", p.on_boundary}};
  };
  json mins = json::array();
  for (const auto& m : s.local_minima) mins.push_back(pt(m));
  return {{"origin", pt(s.origin)},
          {"origin_local_min", s.origin_local_min},
          {"global_min", pt(s.global_min)},
          {"local_minima", mins}};
}

json to_json(const lightcone::Expansion& e) {
  using namespace lightcone;
  auto rat = [](const Rational& r) {
    std::ostringstream n, d;
    n << boost::multiprecision::numerator(r);
    d << boost::multiprecision::denominator(r);
    return json::array({n.str(), d.str()});
  };
  json terms = json::array();
  for (const auto& [k, c] : e.terms) {
    json mons = json::array();
    for (const auto& [mono, g] : c.terms()) {
      json pw = json::object();
      for (int i = 0; i < symbol_count; ++i)
        if (mono[i] != 0) pw[to_string(static_cast<Symbol>(i))] = mono[i];
      mons.push_back({{"powers", pw}, {"re", rat(g.re)}, {"im", rat(g.im)}});
    }
    terms.push_back({{"grade", to_string(k.grade)},
                     {"inv_pow", k.inv_pow},
                     {"log_pow", k.log_pow},
                     {"support", to_string(k.support)},
                     {"eps", k.eps},
                     {"degree", k.degree()},
                     {"coefficient", c.to_string()},
                     {"monomials", mons}});
  }
  json out = {{"terms", terms}};
  if (e.omitted_degree == INT_MAX) out["valid_through"] = nullptr;
  else out["valid_through"] = e.valid_through();
  return out;
}

lightcone::Rational rational_from_string(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return lightcone::Rational(boost::multiprecision::cpp_int(s));
    return lightcone::Rational(boost::multiprecision::cpp_int(s.substr(0, slash)),
                               boost::multiprecision::cpp_int(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Validation, "not a rational number: '" + s + "'");
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

// nlohmann::json objects keep keys sorted, so dump() is canonical.
std::string config_hash(const json& j) { return hex64(fnv1a64(j.dump())); }

std::string solver_traces_csv(const SolverResult& r) {
  std::string out = "seed,iteration,stage,objective\n";
  for (const auto& t : r.traces)
    for (size_t i = 0; i < t.objective.size(); ++i)
      out += std::to_string(t.seed) + "," + std::to_string(i) + "," + std::to_string(t.stage[i]) + "," +
             fmt(t.objective[i]) + "\n";
  return out;
}

std::string pauli_vectors_csv(const LocalCorrelation& L) {
  std::string out = "x,rho,v1,v2,v3,length\n";
  for (int x = 0; x < L.m(); ++x)
    out += std::to_string(x) + "," + fmt(L.rho[x]) + "," + fmt(L.v[x][0]) + "," + fmt(L.v[x][1]) + "," +
           fmt(L.v[x][2]) + "," + fmt(L.v[x].norm()) + "\n";
  return out;
}

std::string landscape_csv(const LandscapeSurface& s) {
  std::string out = "tau1,tau2,S\n";
  for (size_t i = 0; i < s.tau.size(); ++i)
    for (size_t j = 0; j < s.tau.size(); ++j)
      out += fmt(s.tau[i]) + "," + fmt(s.tau[j]) + "," + fmt(s.S(Eigen::Index(i), Eigen::Index(j))) + "\n";
  return out;
}

std::string fig3_csv(const std::vector<LandscapeRow>& rows) {
  std::string out = "v,re_lambda_plus,im_lambda_plus,re_lambda_minus,im_lambda_minus,kind,constraint\n";
  for (const auto& r : rows) {
    if (!r.ok || r.roots.size() != 2) continue;
    cplx p = r.roots[0], m = r.roots[1];
    // lambda_+ : larger real part, or positive imaginary part for a conjugate pair
    const bool swap = std::abs(p.imag()) > 1e-12 || std::abs(m.imag()) > 1e-12 ? p.imag() < m.imag() : p.real() < m.real();
    if (swap) std::swap(p, m);
    out += fmt(r.param) + "," + fmt(p.real()) + "," + fmt(p.imag()) + "," + fmt(m.real()) + "," + fmt(m.imag()) + "," +
           to_string(r.kind) + "," + fmt(r.constraint) + "\n";
  }
  return out;
}

StateStabilityFunctions stability_functions_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Validation, "empty CSV");
  auto strip = [](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\r'; }), s.end());
    return s;
  };
  if (strip(line) != "qsq,a,b") throw Error(ErrorCode::Validation, "CSV header must be 'qsq,a,b'");
  StateStabilityFunctions f;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip(line);
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double vals[3];
    int n = 0;
    while (std::getline(row, cell, ',')) {
      if (n >= 3) throw Error(ErrorCode::Validation, "too many columns on line " + std::to_string(lineno));
      try {
        size_t used = 0;
        vals[n] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Validation, "bad number '" + cell + "' on line " + std::to_string(lineno));
      }
      ++n;
    }
    if (n != 3) throw Error(ErrorCode::Validation, "expected 3 columns on line " + std::to_string(lineno));
    f.qsq.push_back(vals[0]);
    f.a.push_back(vals[1]);
    f.b.push_back(vals[2]);
  }
  f.validate();
  return f;
}

}  // namespace dstlab
