#pragma once

#include <functional>

#include "dstlab/types.hpp"

namespace dstlab {

// 1+1 grid: N x N offset nodes on [-L, L]^2, Gaussian window exp(-|xi|^2 / (2 sigma^2)).
struct FourierGrid {
  int N = 256;
  double half_extent = 8.0;
  double sigma = 2.0;
  double band = 4.0;  // cone band half-width in units of 1/sigma
};

struct FourierSupportReport {
  double leakage = 0;      // energy with k^2 < 0 farther than band/sigma from the cone, over total
  double raw_leakage = 0;  // all energy with k^2 < 0, over total
  double total_energy = 0;
  double edge_ratio = 0;   // max |field| on the boundary over max |field|
  bool edge_warning = false;
  int N = 0;
};

// Transforms 2 slash(xi) a(xi^2) Theta(xi^2) eps(xi^0), optionally times exp(i shift xi^1).
FourierSupportReport fourier_support_check(const std::function<double(double)>& a, const FourierGrid& grid = {},
                                           double shift = 0.0);

}  // namespace dstlab
