#include "dstlab/causal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace dstlab {

const char* to_string(CausalKind k) {
  switch (k) {
    case CausalKind::Timelike: return "timelike";
    case CausalKind::Spacelike: return "spacelike";
    case CausalKind::Undetermined: return "undetermined";
  }
  return "?";
}

double default_causal_tolerance(const CVector& roots, double rel) {
  const double mx = roots.size() ? roots.cwiseAbs().maxCoeff() : 0.0;
  return rel * (1.0 + mx);
}

CausalClass classify(const CVector& roots, double tau_im, double tau_mod) {
  CausalClass c;
  c.roots = roots;
  c.tau_im = tau_im;
  c.tau_mod = tau_mod;
  const Eigen::Index k = roots.size();
  bool real = true;
  for (Eigen::Index i = 0; i < k; ++i) real = real && std::abs(roots[i].imag()) <= tau_im;
  if (real) {
    c.kind = CausalKind::Timelike;
    return c;
  }
  // greedy conjugate pairing, candidates sorted by (Re, Im)
  std::vector<cplx> r(roots.data(), roots.data() + k);
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  std::vector<bool> used(r.size(), false);
  bool paired = (k % 2 == 0);
  for (size_t i = 0; paired && i < r.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    size_t best = r.size();
    double dbest = tau_mod;
    for (size_t j = 0; j < r.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(r[j] - std::conj(r[i]));
      if (d <= dbest) {
        dbest = d;
        best = j;
      }
    }
    if (best == r.size()) paired = false;
    else used[best] = true;
  }
  if (paired) {
    const auto mod = roots.cwiseAbs();
    if (mod.maxCoeff() - mod.minCoeff() <= tau_mod) {
      c.kind = CausalKind::Spacelike;
      return c;
    }
  }
  c.kind = CausalKind::Undetermined;
  return c;
}

CausalClass classify(const CVector& roots, const Tolerances& tol) {
  const double t = default_causal_tolerance(roots, tol.causal_rel);
  return classify(roots, t, t);
}

int CausalGraph::count(CausalKind k) const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [k](const CausalClass& c) { return c.kind == k; }));
}

CausalGraph causal_graph(const FermionicProjector& P, const Tolerances& tol) {
  const int m = P.space().m;
  CausalGraph g;
  g.m = m;
  g.entries.resize(static_cast<size_t>(m * m));
  for (int x = 0; x < m; ++x) {
    for (int y = x; y < m; ++y) {
      const auto c = classify(closed_chain(P, x, y), tol);
      g.entries[static_cast<size_t>(x * m + y)] = c;
      g.entries[static_cast<size_t>(y * m + x)] = c;
    }
  }
  return g;
}

std::string causal_graph_json(const CausalGraph& g) {
  nlohmann::json j;
  j["m"] = g.m;
  j["nodes"] = nlohmann::json::array();
  for (int x = 0; x < g.m; ++x) j["nodes"].push_back(x);
  auto adj = nlohmann::json::array();
  for (int x = 0; x < g.m; ++x) {
    nlohmann::json row{{"point", x}, {"timelike", nlohmann::json::array()},
                       {"spacelike", nlohmann::json::array()}, {"undetermined", nlohmann::json::array()}};
    for (int y = 0; y < g.m; ++y) {
      if (y == x) continue;
      row[to_string(g.at(x, y).kind)].push_back(y);
    }
    adj.push_back(row);
  }
  j["adjacency"] = adj;
  j["counts"] = {{"timelike", g.count(CausalKind::Timelike)},
                 {"spacelike", g.count(CausalKind::Spacelike)},
                 {"undetermined", g.count(CausalKind::Undetermined)}};
  return j.dump(2);
}

std::string causal_graph_dimacs(const CausalGraph& g) {
  std::ostringstream os;
  os << "c causal relation, labels: T timelike, S spacelike, U undetermined\n";
  os << "p edge " << g.m << ' ' << g.m * (g.m - 1) / 2 << '\n';
  for (int x = 0; x < g.m; ++x)
    for (int y = x + 1; y < g.m; ++y) {
      const char lab = g.at(x, y).kind == CausalKind::Timelike ? 'T' : g.at(x, y).kind == CausalKind::Spacelike ? 'S' : 'U';
      os << "e " << x + 1 << ' ' << y + 1 << ' ' << lab << '\n';
    }
  return os.str();
}

}  // namespace dstlab
