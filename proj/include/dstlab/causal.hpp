#pragma once

#include <string>
#include <vector>

#include "dstlab/indefinite.hpp"

namespace dstlab {

enum class CausalKind { Timelike, Spacelike, Undetermined };

const char* to_string(CausalKind k);

struct CausalClass {
  CausalKind kind = CausalKind::Undetermined;
  CVector roots;
  double tau_im = 0;
  double tau_mod = 0;
};

// Default tolerances: rel * (1 + max|lambda|) for both.
double default_causal_tolerance(const CVector& roots, double rel = 1e-9);

CausalClass classify(const CVector& roots, double tau_im, double tau_mod);
CausalClass classify(const CVector& roots, const Tolerances& tol = {});
inline CausalClass classify(const ClosedChain& c, const Tolerances& tol = {}) { return classify(c.roots, tol); }

struct CausalGraph {
  int m = 0;
  std::vector<CausalClass> entries;  // row major m x m
  const CausalClass& at(int x, int y) const { return entries[static_cast<size_t>(x * m + y)]; }
  int count(CausalKind k) const;
};

CausalGraph causal_graph(const FermionicProjector& P, const Tolerances& tol = {});

// {"m":..,"nodes":[..],"adjacency":[{"point":x,"timelike":[..],"spacelike":[..],"undetermined":[..]}]}
std::string causal_graph_json(const CausalGraph& g);

// "p edge m E" header then "e x y label" lines, x < y, 1-based.
std::string causal_graph_dimacs(const CausalGraph& g);

}  // namespace dstlab
