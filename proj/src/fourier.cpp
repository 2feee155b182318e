#include "dstlab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

namespace dstlab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place forward 2D transform.
void fft2(std::vector<std::complex<double>>& data, int N) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(N, N, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

FourierSupportReport fourier_support_check(const std::function<double(double)>& a, const FourierGrid& g,
                                           double shift) {
  if (g.N < 8 || g.half_extent <= 0 || g.sigma <= 0) throw Error(ErrorCode::Validation, "bad Fourier grid");
  const int N = g.N;
  const double h = 2.0 * g.half_extent / N;
  std::vector<std::complex<double>> f0(static_cast<size_t>(N) * N), f1(f0.size());
  double fmax = 0, edge = 0;
  for (int i = 0; i < N; ++i) {
    const double t = -g.half_extent + (i + 0.5) * h;
    for (int j = 0; j < N; ++j) {
      const double x = -g.half_extent + (j + 0.5) * h;
      const double z = t * t - x * x;
      std::complex<double> c = 0;
      if (z > 0) {
        const double w = std::exp(-(t * t + x * x) / (2.0 * g.sigma * g.sigma));
        c = 2.0 * a(z) * (t >= 0 ? 1.0 : -1.0) * w * std::polar(1.0, shift * x);
      }
      f0[static_cast<size_t>(i) * N + j] = c * t;
      f1[static_cast<size_t>(i) * N + j] = c * x;
      const double mag = std::hypot(std::abs(c * t), std::abs(c * x));
      fmax = std::max(fmax, mag);
      if (i == 0 || j == 0 || i == N - 1 || j == N - 1) edge = std::max(edge, mag);
    }
  }
  FourierSupportReport r;
  r.N = N;
  r.edge_ratio = fmax > 0 ? edge / fmax : 0.0;
  r.edge_warning = r.edge_ratio > 1e-6;
  if (fmax == 0) return r;
  fft2(f0, N);
  fft2(f1, N);
  const double dk = 2.0 * std::numbers::pi / (N * h);
  const double band = g.band / g.sigma;
  double total = 0, raw = 0, out = 0;
  for (int i = 0; i < N; ++i) {
    const double k0 = dk * (i < N / 2 ? i : i - N);
    for (int j = 0; j < N; ++j) {
      const double k1 = dk * (j < N / 2 ? j : j - N);
      const size_t idx = static_cast<size_t>(i) * N + j;
      const double e = std::norm(f0[idx]) + std::norm(f1[idx]);
      total += e;
      if (k0 * k0 - k1 * k1 < 0) {
        raw += e;
        const double dist = std::min(std::abs(k0 - k1), std::abs(k0 + k1)) / std::numbers::sqrt2;
        if (dist > band) out += e;
      }
    }
  }
  r.total_energy = total * h * h * h * h;
  r.raw_leakage = raw / total;
  r.leakage = out / total;
  return r;
}

}  // namespace dstlab
